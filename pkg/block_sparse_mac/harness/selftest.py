"""Oracle checks on tiny instances, run by the ``selftest`` command."""

import itertools
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from block_sparse_mac.analysis.capacity import frame_capacity
from block_sparse_mac.analysis.coherence import coherence_profile, gram_bounds_hold
from block_sparse_mac.codec.genie_codec import CodecSpec, decode
from block_sparse_mac.model.channels import generate_channels
from block_sparse_mac.model.frame import FrameInstance, synthesize_frame
from block_sparse_mac.model.precoding import generate_precoders
from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.operator.block_dictionary import BlockDictionary
from block_sparse_mac.operator.least_squares import restricted_ls
from block_sparse_mac.recovery.pursuit import bomp
from block_sparse_mac.utils.rng import SEED_STREAMS, complex_normal, make_rng


def tiny_config(seed: int = 0) -> SystemConfig:
    return SystemConfig(
        M=2, N=6, N_a=2, d=2, T=8, rho0=10.0, K=2, t_c=0, seed=seed, precoding_orthogonal=True
    )


TINY_INSTANCES = 100


@dataclass(frozen=True)
class SelftestCheck:
    name: str
    passed: bool
    detail: str


def exhaustive_support_search(
    dictionary: BlockDictionary, y: np.ndarray, scale: float, size: int
) -> tuple[int, ...]:
    """Support of the given size with the smallest least-squares residual"""
    best_support: tuple[int, ...] = ()
    best_residual = np.inf
    for support in itertools.combinations(range(dictionary.N), size):
        solution = restricted_ls(dictionary, y, support, scale)
        residual = np.linalg.norm(y - scale * dictionary.apply_blocks(support, solution.blocks))
        if residual < best_residual:
            best_support, best_residual = support, residual
    return best_support


def tiny_instance(
    cfg: SystemConfig, instance: int, noiseless: bool = True
) -> tuple[BlockDictionary, FrameInstance]:
    rng = make_rng(cfg.seed, SEED_STREAMS.SELFTEST, instance)
    precoders = generate_precoders(cfg, rng)
    channels = generate_channels(cfg, rng)
    frame = synthesize_frame(cfg, precoders, channels, rng, noiseless=noiseless)
    return BlockDictionary(precoders, channels), frame


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(b)), 1e-300)
    return float(np.linalg.norm(a - b)) / scale


def check_explicit_operator(cfg: SystemConfig) -> SelftestCheck:
    worst = 0.0
    for instance in range(TINY_INSTANCES):
        dictionary, _ = tiny_instance(cfg, instance)
        rng = make_rng(cfg.seed, SEED_STREAMS.SELFTEST, instance, 1)
        x = complex_normal(rng, dictionary.N * dictionary.d)
        v = complex_normal(rng, dictionary.M * dictionary.T)
        explicit = dictionary.materialize()
        worst = max(
            worst,
            _relative(dictionary.apply(x), explicit @ x),
            _relative(dictionary.adjoint(v), explicit.conj().T @ v),
        )
    return SelftestCheck("explicit operator", worst < 1e-12, f"worst relative error {worst:.2e}")


def check_restricted_ls(cfg: SystemConfig) -> SelftestCheck:
    worst = 0.0
    for instance in range(TINY_INSTANCES):
        dictionary, frame = tiny_instance(cfg, instance, noiseless=False)
        support = [int(n) for n in frame.support]
        solution = restricted_ls(dictionary, frame.received, support, cfg.signal_scale)
        explicit = cfg.signal_scale * dictionary.materialize(support)
        oracle = np.linalg.pinv(explicit) @ frame.received
        worst = max(worst, _relative(solution.blocks.reshape(-1), oracle))
    return SelftestCheck("restricted least squares", worst < 1e-10, f"worst relative error {worst:.2e}")


def explicit_bomp(explicit: np.ndarray, y: np.ndarray, d: int, iterations: int) -> tuple[int, ...]:
    """Selection order of BOMP run on an explicit dictionary with pseudo-inverse LS"""
    blocks = explicit.shape[1] // d
    selected: list[int] = []
    residual = y
    for _ in range(min(iterations, blocks)):
        norms = np.linalg.norm((explicit.conj().T @ residual).reshape(blocks, d), axis=1)
        norms[selected] = -np.inf
        selected.append(int(np.argmax(norms)))
        columns = np.hstack([explicit[:, j * d : (j + 1) * d] for j in selected])
        residual = y - columns @ (np.linalg.pinv(columns) @ y)
    return tuple(selected)


def check_bomp_support(cfg: SystemConfig) -> SelftestCheck:
    """Selections must equal explicit BOMP; the exhaustive-search count is only reported"""
    same_as_explicit = same_as_exhaustive = 0
    for instance in range(TINY_INSTANCES):
        dictionary, frame = tiny_instance(cfg, instance)
        result = bomp(dictionary, frame.received, cfg)
        selections = tuple(record.selected for record in result.trace)
        explicit = explicit_bomp(dictionary.materialize(), frame.received, cfg.d, cfg.K)
        oracle = exhaustive_support_search(dictionary, frame.received, cfg.signal_scale, cfg.N_a)
        same_as_explicit += selections == explicit
        same_as_exhaustive += sorted(result.support) == list(oracle)
    return SelftestCheck(
        "BOMP support vs explicit BOMP",
        same_as_explicit == TINY_INSTANCES,
        f"{same_as_explicit}/{TINY_INSTANCES} selection orders match explicit BOMP, "
        f"{same_as_exhaustive}/{TINY_INSTANCES} supports match exhaustive search",
    )


def check_residual_monotone(cfg: SystemConfig) -> SelftestCheck:
    violations = 0
    for instance in range(TINY_INSTANCES):
        dictionary, frame = tiny_instance(cfg, instance, noiseless=False)
        norms = [record.residual_norm for record in bomp(dictionary, frame.received, cfg).trace]
        violations += any(b > a * (1 + 1e-12) for a, b in zip(norms, norms[1:]))
    return SelftestCheck("residual monotonicity", violations == 0, f"{violations} violations")


def check_gram_bounds(cfg: SystemConfig) -> SelftestCheck:
    failures = 0
    for instance in range(20):
        dictionary, frame = tiny_instance(cfg, instance, noiseless=False)
        profile = coherence_profile(dictionary, frame.blocks, frame.noise, frame.support)
        failures += not gram_bounds_hold(dictionary, profile)
    return SelftestCheck("Gram-block bounds", failures == 0, f"{failures} failing instances")


def check_determinant_identity(cfg: SystemConfig) -> SelftestCheck:
    worst = 0.0
    for instance in range(20):
        dictionary, frame = tiny_instance(cfg, instance)
        support = [int(n) for n in frame.support]
        explicit = dictionary.materialize(support)
        _, direct = np.linalg.slogdet(
            np.eye(explicit.shape[0]) + cfg.rho0 * explicit @ explicit.conj().T
        )
        reduced = frame_capacity(dictionary, support, cfg.rho0)
        worst = max(worst, abs(reduced - direct / np.log(2)) / max(abs(reduced), 1e-300))
    return SelftestCheck("determinant identity", worst < 1e-9, f"worst relative error {worst:.2e}")


def check_codec(cfg: SystemConfig) -> SelftestCheck:
    rng = make_rng(cfg.seed, SEED_STREAMS.SELFTEST, TINY_INSTANCES)
    d = 50
    truth = np.exp(1j * np.pi / 4 * (2 * rng.integers(0, 4, size=d) + 1))
    failures = 0
    for _ in range(100):
        estimate = truth + 0.8 * complex_normal(rng, d)
        certified = []
        for t_c in range(-1, 12):
            spec = CodecSpec(t_c, cfg.modulation, d)
            outcome = decode(estimate, truth, spec)
            again = decode(outcome.block, truth, spec)
            failures += again.certified != outcome.certified
            failures += outcome.certified and not np.array_equal(outcome.block, truth)
            certified.append(outcome.certified)
        failures += any(a and not b for a, b in zip(certified, certified[1:]))
    return SelftestCheck("codec idempotence and monotonicity", failures == 0, f"{failures} failures")


CHECKS: tuple[Callable[[SystemConfig], SelftestCheck], ...] = (
    check_explicit_operator,
    check_restricted_ls,
    check_bomp_support,
    check_residual_monotone,
    check_gram_bounds,
    check_determinant_identity,
    check_codec,
)


def run_selftest(seed: int = 0) -> list[SelftestCheck]:
    cfg = tiny_config(seed)
    return [check(cfg) for check in CHECKS]
