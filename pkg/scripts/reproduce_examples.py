"""Print the worked examples: witnesses in l_inf, l_1 and l_2, the adjoined
l_1^2 and Lorentz cones, pure states and periphery points."""

import numpy as np

from orderunit import Lp, INF, check_nou, paper_witness, spin_factor
from orderunit.adjoin import adjoin_order_unit, canopy_periphery_membership
from orderunit.norms import basis, norm
from orderunit.order import cone_membership, linf_natural, reals
from orderunit.states import pure_states_product_check

np.set_printoptions(precision=6, suppress=True)


def show_witness(space, e):
    v = check_nou(space, e, seed=0, budget=10_000)
    print(f"{space}  e = {np.asarray(e)}  ->  {v.status.value}")
    if v.witness is not None:
        w = v.witness
        print(f"    x = {w.x}  lambda = {w.lambda_star:.12g}  ||2x - ||x|| e|| - ||x|| = {w.consequent_value:.12g}")


def main():
    print("== norming order units ==")
    show_witness(Lp(4, INF), [1.0, -1.0, 1.0, 1.0])
    show_witness(Lp(3, INF), [1.0, 0.5, 1.0])
    show_witness(Lp(3, 1.0), [0.5, 0.5, 0.0])
    show_witness(Lp(3, 1.0), basis(3, 1, -1.0))
    show_witness(Lp(2, 2.0), [1.0, 0.0])

    print("\n== l_2 coordinate unit, u = (0.6, 0.8) ==")
    s, e, u = Lp(2, 2.0), basis(2, 0), np.array([0.6, 0.8])
    for lam in (17 / 15, 1.6, 5 / 3, 2.0):
        print(f"    lambda = {lam:.6f}: ||2u - lambda e|| - lambda = {norm(s, 2 * u - lam * e) - lam:+.6f}")
    print(f"    ||2u - e||^2 = {norm(s, 2 * u - e) ** 2:.6f}  (= 5 - 4 * 0.6)")
    print(f"    construction: {paper_witness(s, e)}")

    print("\n== adjoining ==")
    A = adjoin_order_unit(reals(), Lp(1, 1.0))
    for z in ([1.0, 0.9], [1.0, -1.0], [1.0, 1.1]):
        print(f"    (R,1) (+)_1 R: {z} in cone: {cone_membership(A.composite, z).inside}")
    S = spin_factor(3)
    for z in ([1.0, 0.6, 0.8, 0.0], [1.0, 0.6, 0.8, 0.1]):
        print(f"    spin factor: {z} in cone: {cone_membership(S.composite, z).inside}")

    print("\n== pure states ==")
    for V, X in ((linf_natural(2), Lp(2, INF)), (reals(), Lp(1, 1.0)), (linf_natural(2), Lp(2, 1.0))):
        rep = pure_states_product_check(adjoin_order_unit(V, X))
        print(f"    ({V.provenance}) (+)_1 {X}: {rep.data['enumerated']} pure states, product check {rep.passed}")

    print("\n== periphery over natural l_inf^2 (+)_1 R ==")
    A = adjoin_order_unit(linf_natural(2), Lp(1, 1.0))
    for u, x in (([0.7, 0.3], [0.3]), ([1.0, 1.0], [0.0]), ([0.35, 0.15], [0.15])):
        v = canopy_periphery_membership(A, u, x)
        print(f"    u = {u}, x = {x}: canopy {v.in_canopy}, periphery {v.in_periphery}, characterised {v.in_periphery_characterized}")


if __name__ == "__main__":
    main()
