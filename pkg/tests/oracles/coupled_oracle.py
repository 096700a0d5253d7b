# Independent high-cutoff oracle for the coupled-pair resonance inputs.
#
# Self-contained: diagonalizes each side at n_fock = 40 and prints the
# splittings and quadrature(-squared) elements entering the exchange
# resonance, plus the first-order drive frequency at the transfer-demo
# coupling values.  Rerun with
#   python tests/oracles/coupled_oracle.py

import numpy as np
from scipy.linalg import eigh

N_FOCK = 40

# transfer-demo bridge constants (see CoupledCircuitParams.inversion_demo)
PHI0 = 3.2911e-16
IC = 93e-6
Z, C = 80.0, 200e-15
BIAS, DEPTH = 1.0, 0.2


def side(omega_a, g):
    a = np.diag(np.sqrt(np.arange(1.0, N_FOCK)), 1)
    x = a + a.T
    sz = np.array([[-1.0, 0.0], [0.0, 1.0]])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    h = (np.kron(np.eye(2), a.T @ a)
         + 0.5 * omega_a * np.kron(sz, np.eye(N_FOCK))
         + g * np.kron(sx, x))
    vals, vecs = eigh(h)
    for j in range(vecs.shape[1]):
        k = np.argmax(np.abs(vecs[:, j]))
        if vecs[k, j] < 0:
            vecs[:, j] = -vecs[:, j]
    quad = np.kron(np.eye(2), x)
    quad2 = np.kron(np.eye(2), x @ x)
    f = vecs.T @ quad @ vecs
    x2 = vecs.T @ quad2 @ vecs
    return vals - vals[0], f, x2


def main():
    ratio = PHI0 / (4.0 * IC * Z * Z * C)
    jbar = ratio / np.cos(BIAS)
    jmod = ratio * np.sin(BIAS) / np.cos(BIAS) ** 2 * DEPTH
    print(f"# demo couplings: jbar_j = {jbar:.10e}, j_j = {jmod:.10e}, "
          f"j_0 = {2 * jmod:.10e}")
    vals_l, f_l, x2_l = side(0.8, 0.3)
    vals_r, f_r, x2_r = side(1.0, 0.9)
    print(f"omega_10_left  = {vals_l[1]:.12f}")
    print(f"omega_10_right = {vals_r[1]:.12f}")
    print(f"f01_left = {f_l[0, 1]:.10f}   f01_right = {f_r[0, 1]:.10f}")
    print(f"X00_left = {x2_l[0, 0]:.10f}  X11_left = {x2_l[1, 1]:.10f}")
    print(f"X00_right = {x2_r[0, 0]:.10f} X11_right = {x2_r[1, 1]:.10f}")
    wd = (vals_r[1] + jbar * (x2_r[1, 1] - x2_r[0, 0])) - (
        vals_l[1] + jbar * (x2_l[1, 1] - x2_l[0, 0]))
    print(f"first_order_omega_d = {wd:.12f}")
    jeff = 0.5 * 2 * jmod * abs(f_l[0, 1] * f_r[0, 1])
    print(f"j_eff = {jeff:.10e}")


if __name__ == "__main__":
    main()
