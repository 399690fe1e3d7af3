"""Independent reference computations used by the tests.

Nothing here imports the closed forms under test.
"""

from __future__ import annotations

import math

import numpy as np


def omega(modes: int) -> np.ndarray:
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Sorted (descending) symplectic spectrum via |eig(i Omega gamma)|."""
    modes = gamma.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * omega(modes) @ gamma))
    ev = np.sort(ev)[::-1]
    return ev[::2]


def g_bits(x: float) -> float:
    if x <= 0:
        return 0.0
    return (x + 1) * math.log2(x + 1) - x * math.log2(x)


def entropy(gamma: np.ndarray) -> float:
    return sum(g_bits((nu - 1) / 2) for nu in symplectic_eigenvalues(gamma))


def beam_splitter(transmittance: float) -> np.ndarray:
    """Symplectic matrix of a beam splitter acting on two modes."""
    t, r = math.sqrt(transmittance), math.sqrt(1 - transmittance)
    eye = np.eye(2)
    return np.block([[t * eye, r * eye], [-r * eye, t * eye]])


def holevo_entanglement_based(v, t, xi, eta, v_ele):
    """Holevo bound S(E) - S(E|B) for heterodyne detection with a trusted
    noisy, inefficient detector, built from the explicit entanglement-based
    covariance matrices (modes ordered x, p per mode).

    Returns (chi_be, [nu_AB...], [nu_AFG|B...]).
    """
    z = np.diag([1.0, -1.0])
    eye = np.eye(2)
    chi_line = 1 / t - 1 + xi
    c = math.sqrt(t * (v * v - 1))
    gamma_ab = np.block([[v * eye, c * z], [c * z, t * (v + chi_line) * eye]])

    # detector noise: EPR pair (F0, G) injected through a beam splitter
    # of transmittance eta; its variance reproduces the electronic noise
    w = 1.0 if v_ele == 0 else 1 + 2 * v_ele / (1 - eta)
    cw = math.sqrt(w * w - 1)
    gamma_fg = np.block([[w * eye, cw * z], [cw * z, w * eye]])
    # modes: A, B1, F0, G
    gamma = np.zeros((8, 8))
    gamma[:4, :4] = gamma_ab
    gamma[4:, 4:] = gamma_fg
    s = np.eye(8)
    s[2:6, 2:6] = beam_splitter(eta)  # mixes B1 and F0 -> B2, F
    gamma = s @ gamma @ s.T

    idx_b = [2, 3]
    idx_rest = [0, 1, 4, 5, 6, 7]
    g_b = gamma[np.ix_(idx_b, idx_b)]
    g_r = gamma[np.ix_(idx_rest, idx_rest)]
    sig = gamma[np.ix_(idx_rest, idx_b)]
    cond = g_r - sig @ np.linalg.inv(g_b + eye) @ sig.T

    nu_ab = symplectic_eigenvalues(gamma_ab)
    nu_cond = symplectic_eigenvalues(cond)
    return entropy(gamma_ab) - entropy(cond), list(nu_ab), list(nu_cond)


def fixed_point_chi_t(v_a, t, xi_e, xi_drift, e_ref_sq, chi_het, added=0.0):
    """chi_t solves chi = base + v_a*(chi + 1)/e_ref_sq, which is linear."""
    r = v_a / e_ref_sq
    base = 1 / t - 1 + xi_e + xi_drift + added + chi_het / t
    return (base + r) / (1 - r)
