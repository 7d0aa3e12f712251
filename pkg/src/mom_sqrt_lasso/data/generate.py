"""Synthetic sparse regression data with heavy-tailed options and outliers.

Design, noise, support and contamination each draw from their own Philox
stream spawned from ``SeedSequence(seed)``, so switching the contamination
model never changes X or the noise.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..exceptions import InvalidInputError
from .contaminate import DEFAULT_MAGNITUDE, ContaminationModel, contaminate
from .dataset import Dataset, GroundTruth

logger = logging.getLogger(__name__)


class Design(str, Enum):
    GAUSSIAN = "gaussian"
    STUDENT_T = "student-t"
    RADEMACHER = "rademacher"


class NoiseLaw(str, Enum):
    GAUSSIAN = "gaussian"
    STUDENT_T = "student-t"


class BetaPattern(str, Enum):
    FIRST_S_ONES = "first-s-ones"
    RANDOM_SUPPORT = "random-support"


@dataclass(frozen=True)
class GenSpec:
    n: int
    d: int
    s: int
    sigma_star: float = 1.0
    design: Design = Design.GAUSSIAN
    design_nu: Optional[float] = None
    noise: NoiseLaw = NoiseLaw.GAUSSIAN
    noise_nu: float = 5.0
    beta_pattern: BetaPattern = BetaPattern.FIRST_S_ONES
    beta_magnitude: float = 1.0
    contamination: ContaminationModel = ContaminationModel.NONE
    n_outliers: int = 0
    contamination_magnitude: Optional[float] = None
    seed: int = 0

    def __post_init__(self) -> None:
        for name, enum in (
            ("design", Design),
            ("noise", NoiseLaw),
            ("beta_pattern", BetaPattern),
            ("contamination", ContaminationModel),
        ):
            try:
                object.__setattr__(self, name, enum(getattr(self, name)))
            except ValueError as exc:
                raise InvalidInputError(str(exc)) from exc
        if self.n < 1 or self.d < 1:
            raise InvalidInputError(f"n and d must be >= 1, got n={self.n}, d={self.d}")
        if not 0 <= self.s <= self.d:
            raise InvalidInputError(f"need 0 <= s <= d, got s={self.s}, d={self.d}")
        if not 0 <= self.n_outliers <= self.n:
            raise InvalidInputError(f"need 0 <= n_outliers <= n, got {self.n_outliers}")
        if not self.sigma_star >= 0:
            raise InvalidInputError(f"sigma_star must be >= 0, got {self.sigma_star}")
        if self.noise is NoiseLaw.STUDENT_T and not self.noise_nu > 4:
            raise InvalidInputError(f"student-t noise needs nu > 4, got {self.noise_nu}")
        if self.design is Design.STUDENT_T and not self.resolved_design_nu > 2:
            raise InvalidInputError(f"student-t design needs nu > 2, got {self.design_nu}")

    @property
    def resolved_design_nu(self) -> float:
        if self.design_nu is not None:
            return float(self.design_nu)
        return float(max(5, math.ceil(math.log(self.d))))

    @property
    def resolved_magnitude(self) -> float:
        if self.contamination_magnitude is not None:
            return float(self.contamination_magnitude)
        return DEFAULT_MAGNITUDE[self.contamination]


def _unit_student_t(rng: np.random.Generator, nu: float, size) -> np.ndarray:
    return rng.standard_t(nu, size=size) / math.sqrt(nu / (nu - 2))


def _design(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    shape = (spec.n, spec.d)
    if spec.design is Design.GAUSSIAN:
        return rng.standard_normal(shape)
    if spec.design is Design.STUDENT_T:
        return _unit_student_t(rng, spec.resolved_design_nu, shape)
    return rng.integers(0, 2, size=shape).astype(float) * 2 - 1


def _noise(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.noise is NoiseLaw.GAUSSIAN:
        z = rng.standard_normal(spec.n)
    else:
        z = _unit_student_t(rng, spec.noise_nu, spec.n)
    return spec.sigma_star * z


def _beta(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    beta = np.zeros(spec.d)
    if spec.beta_pattern is BetaPattern.FIRST_S_ONES:
        beta[: spec.s] = spec.beta_magnitude
    else:
        support = np.sort(rng.choice(spec.d, size=spec.s, replace=False))
        signs = rng.choice(np.array([-1.0, 1.0]), size=spec.s)
        beta[support] = signs * spec.beta_magnitude
    return beta


def generate(spec: GenSpec) -> Dataset:
    """Draw (X, y = X beta* + noise) and corrupt ``spec.n_outliers`` rows."""
    design_seq, noise_seq, support_seq, contamination_seq = np.random.SeedSequence(spec.seed).spawn(4)
    x = _design(spec, np.random.Generator(np.random.Philox(design_seq)))
    zeta = _noise(spec, np.random.Generator(np.random.Philox(noise_seq)))
    beta = _beta(spec, np.random.Generator(np.random.Philox(support_seq)))

    noise_name = spec.noise.value
    if spec.noise is NoiseLaw.STUDENT_T:
        noise_name = f"{noise_name}({spec.noise_nu:g})"
    truth = GroundTruth(beta_star=beta, sigma_star=spec.sigma_star, noise=noise_name)
    clean = Dataset(x=x, y=x @ beta + zeta, truth=truth)
    logger.debug(f"generated n={spec.n} d={spec.d} s={spec.s} design={spec.design.value}")
    return contaminate(
        clean,
        spec.contamination,
        spec.n_outliers,
        contamination_seq,
        spec.resolved_magnitude,
    )
