import itertools

import numpy as np
import pytest

from masseyfp import cohomology as co
from masseyfp import groups as gr
from masseyfp import linalg
from masseyfp import unipotent as un


@pytest.mark.parametrize("size,p", [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_orders_and_matrix_law(size, p):
    U = un.u_group(size, p)
    assert U.order == p ** (size * (size - 1) // 2)
    Ub = un.ubar_group(size, p)
    assert Ub.order == U.order // p
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, U.order, (50, 2)):
        assert np.array_equal(U.matrices[a] @ U.matrices[b] % p, U.matrices[U.mul[a, b]])


@pytest.mark.parametrize("size,p", [(3, 2), (3, 3), (4, 2)])
def test_corner_quotient_kernel_is_center(size, p):
    f = un.corner_quotient(size, p)
    U = f.source
    center = [z for z in range(U.order) if all(U.mul[z, g] == U.mul[g, z] for g in range(U.order))]
    assert sorted(f.kernel().members) == center
    assert len(center) == p


def test_superdiagonal_quotient_is_abelianization_for_u4():
    f = un.superdiagonal_quotient(4, 2)
    U = f.source
    comms = {U.m(a, b, int(U.inv[a]), int(U.inv[b])) for a in range(U.order) for b in range(U.order)}
    derived = set(U.closure(list(comms)).tolist())
    assert derived == set(f.kernel().members)


def test_ubar_element_has_no_corner():
    u = un.UBarElement.from_dict(4, 2, {(1, 2): 1, (1, 3): 1})
    assert u[1, 3] == 1
    with pytest.raises(KeyError):
        u[1, 4]
    with pytest.raises(KeyError):
        un.proj(u, 3, 2)


def test_element_roundtrip_and_json():
    U = un.u_group(4, 3)
    for g in (0, 17, 400, 728):
        u = un.unipotent_of(U, g)
        assert un.element(U, u) == g
        assert np.array_equal(u.matrix(), U.matrices[g])
        js = u.to_json()
        assert js["size"] == 4 and js["p"] == 3
        back = un.UnipotentElement.from_dict(4, 3, {(i, j): v for i, j, v in js["entries"]})
        assert back == u
    a, b = un.unipotent_of(U, 17), un.unipotent_of(U, 400)
    assert (a * b).entries == un.unipotent_of(U, U.mul[17, 400]).entries
    assert (a * a.inverse()) == un.UnipotentElement.from_dict(4, 3, {})


@pytest.mark.parametrize("p", [2, 3, 5])
def test_kernel_module_is_a_module(p):
    for M in (un.kernel_module(p), un.dual_kernel_module(p)):
        M._check()
        assert M.group is gr.elementary_abelian(p, 3)


@pytest.mark.parametrize("p", [2, 3])
def test_extension_cocycle(p):
    eps = un.extension_cocycle(p)
    assert co.coboundary(eps).is_zero()
    V = eps.module.group
    x = V.labels.index((1, 0, 0))
    z = V.labels.index((0, 0, 1))
    # s(x) s(z) = s(x + z) since E12 and E34 commute
    assert not eps.values[x, z].any()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_psi_prime_is_inverse_transpose(p):
    for x, y, z in itertools.product(range(p), repeat=3):
        assert np.array_equal(un.psi_prime(x, y, z, p), linalg.inv_transpose(un.psi(x, y, z, p), p))


def test_translation_group_shape():
    G = un.translation_group(3)
    assert G.order == 9 and G.is_abelian()
    assert G.exponent == 3
