"""Configuration Management for algmat"""
import os
import logging
from typing import Optional
from dataclasses import dataclass
from dotenv import load_dotenv

# Load environment variables immediately
load_dotenv()


@dataclass
class GroebnerConfig:
    max_pairs: int
    max_exponent: int
    max_basis_size: int = 5000
    cache_size: int = 4096


@dataclass
class MatroidConfig:
    max_ground_set: int
    max_isomorphism_ground_set: int
    axiom_check_limit: int = 10


@dataclass
class SamplingConfig:
    seed: int
    bound: int
    candidates: int = 20


@dataclass
class RunConfig:
    jobs: int
    log_level: str
    log_file: Optional[str] = None
    fixtures_path: str = "./fixtures"


class Config:
    def __init__(self):
        self.groebner = GroebnerConfig(
            max_pairs=int(os.getenv("ALGMAT_MAX_PAIRS", "100000")),
            max_exponent=int(os.getenv("ALGMAT_MAX_EXPONENT", str(2 ** 20))),
            max_basis_size=int(os.getenv("ALGMAT_MAX_BASIS_SIZE", "5000")),
            cache_size=int(os.getenv("ALGMAT_GB_CACHE_SIZE", "4096"))
        )

        self.matroid = MatroidConfig(
            max_ground_set=int(os.getenv("ALGMAT_MAX_GROUND_SET", "16")),
            max_isomorphism_ground_set=int(os.getenv("ALGMAT_MAX_ISO_GROUND_SET", "12")),
            axiom_check_limit=int(os.getenv("ALGMAT_AXIOM_CHECK_LIMIT", "10"))
        )

        self.sampling = SamplingConfig(
            seed=int(os.getenv("ALGMAT_SEED", "0")),
            bound=int(os.getenv("ALGMAT_BOUND", "1000")),
            candidates=int(os.getenv("ALGMAT_CANDIDATES", "20"))
        )

        self.run = RunConfig(
            jobs=int(os.getenv("ALGMAT_JOBS", "1")),
            log_level=os.getenv("ALGMAT_LOG_LEVEL", "WARNING").upper(),
            log_file=os.getenv("ALGMAT_LOG_FILE") or None,
            fixtures_path=os.getenv("ALGMAT_FIXTURES", "./fixtures")
        )

        self._validate()

    def _validate(self):
        """Validate limits and logging settings"""
        limits = {
            "ALGMAT_MAX_PAIRS": self.groebner.max_pairs,
            "ALGMAT_MAX_EXPONENT": self.groebner.max_exponent,
            "ALGMAT_MAX_BASIS_SIZE": self.groebner.max_basis_size,
            "ALGMAT_GB_CACHE_SIZE": self.groebner.cache_size,
            "ALGMAT_MAX_GROUND_SET": self.matroid.max_ground_set,
            "ALGMAT_MAX_ISO_GROUND_SET": self.matroid.max_isomorphism_ground_set,
            "ALGMAT_BOUND": self.sampling.bound,
            "ALGMAT_CANDIDATES": self.sampling.candidates,
            "ALGMAT_JOBS": self.run.jobs,
        }
        for name, value in limits.items():
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not isinstance(logging.getLevelName(self.run.log_level), int):
            raise ValueError(f"ALGMAT_LOG_LEVEL '{self.run.log_level}' is not a logging level")

        if self.run.log_file:
            os.makedirs(os.path.dirname(os.path.abspath(self.run.log_file)), exist_ok=True)


# Global configuration instance
config = Config()
