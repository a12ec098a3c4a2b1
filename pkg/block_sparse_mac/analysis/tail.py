from scipy.special import gammainc


def noise_tail_prob(tau_tilde: float, d: int, nu: float) -> float:
    """P(||u||_2 <= tau_tilde) for a d-dimensional noise correlation.

    With varsigma = tau_tilde / sqrt(1 + (d-1) nu) this is
    1 - exp(-varsigma^2) sum_{k<d} varsigma^(2k) / k!, the regularized lower
    incomplete gamma function P(d, varsigma^2).
    """
    if tau_tilde < 0:
        raise ValueError(f"tau_tilde must be non-negative, got {tau_tilde}")
    varsigma_squared = tau_tilde**2 / (1 + (d - 1) * nu)
    return float(gammainc(d, varsigma_squared))
