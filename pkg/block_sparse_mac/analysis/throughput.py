from block_sparse_mac.model.system_config import SystemConfig


def throughput(fer: float, cfg: SystemConfig, code_rate: float = 1.0) -> float:
    """Normalized throughput (1 - fer) N_a d / (M T), optionally scaled by the code rate"""
    if not 0.0 <= fer <= 1.0:
        raise ValueError(f"fer must lie in [0, 1], got {fer}")
    return (1.0 - fer) * cfg.N_a * cfg.d / (cfg.M * cfg.T) * code_rate
