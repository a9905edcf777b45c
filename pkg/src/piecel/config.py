"""Curve configuration files and the Euler-factor disk cache.

A config is a JSON document pinning one character piece end to end:

    {"m": 3, "f": ["-2 + z", "0", "z", "1", "1"], "k": 1,
     "bad_primes": {"229": ["1", "-24"]},
     "conductor": 177147, "digits": 8, "coeffs": 30000, "seed": 0}

`f` lists the coefficients of f ascending by degree, each in the same
text encoding `cyclo_to_str` emits, so emit -> parse -> emit is the
identity.  `conductor` is either the rational conductor N_Q or an
object {prime: [lo, hi]} of candidate exponent ranges for the search
command.  `coeffs` may be omitted; the planner then sizes the series
from the conductor and digit target.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path

from .counting import SuperellipticCurve
from .cyclo import CycloElem, cyclo_from_str, cyclo_to_str
from .euler import CharacterTau
from .lseries import lcf_required

__all__ = ["CurveConfig", "load_config", "FactorCache"]


@dataclass(frozen=True)
class CurveConfig:
    """One piece's inputs: curve, character, bad factors, evaluation plan."""

    m: int
    f: tuple
    k: int
    bad_primes: dict = field(default_factory=dict)
    conductor: object = 1
    digits: int = 8
    coeffs: int | None = None
    seed: int = 0

    def __post_init__(self):
        # constructing the curve runs the full validation suite
        # (m in range, degree, gcd(m, n) = 1, separability)
        curve = SuperellipticCurve(self.m, list(self.f))
        if len(self.f) != curve.n + 1:
            raise ValueError("leading coefficient of f must be nonzero")
        if not 0 <= self.k < self.m:
            raise ValueError(f"character index k={self.k} outside 0..{self.m - 1}")
        for p in self.bad_primes:
            if not (isinstance(p, int) and p >= 2):
                raise ValueError(f"bad_primes key {p!r} is not a prime")
        if isinstance(self.conductor, int):
            if self.conductor < 1:
                raise ValueError(f"conductor {self.conductor} must be positive")
        else:
            for p, (lo, hi) in self.conductor.items():
                if not (isinstance(p, int) and p >= 2 and 0 <= lo <= hi):
                    raise ValueError(f"bad conductor range {p}: [{lo}, {hi}]")
        if self.digits < 1:
            raise ValueError("digits must be positive")
        if self.coeffs is not None and self.coeffs < 1:
            raise ValueError("coeffs must be positive when given")

    # -- derived objects ---------------------------------------------------

    def curve(self) -> SuperellipticCurve:
        return SuperellipticCurve(self.m, list(self.f))

    def tau(self) -> CharacterTau:
        return CharacterTau(self.m, self.k)

    def conductor_candidates(self) -> list[int]:
        """Expand exponent ranges into the list of candidate N_Q values."""
        if isinstance(self.conductor, int):
            return [self.conductor]
        primes = sorted(self.conductor)
        spans = [range(self.conductor[p][0], self.conductor[p][1] + 1) for p in primes]
        return [
            math.prod(p**e for p, e in zip(primes, exps))
            for exps in product(*spans)
        ]

    def pinned_conductor(self) -> int:
        if not isinstance(self.conductor, int):
            raise ValueError("config gives conductor ranges, not a single value")
        return self.conductor

    def coefficient_count(self, h: int) -> int:
        """`coeffs` if pinned, else the planner's estimate for `digits`."""
        if self.coeffs is not None:
            return self.coeffs
        return lcf_required(max(self.conductor_candidates()), self.digits, h)

    # -- JSON --------------------------------------------------------------

    @classmethod
    def from_json(cls, text: str) -> "CurveConfig":
        doc = json.loads(text)
        known = {"m", "f", "k", "bad_primes", "conductor", "digits", "coeffs", "seed"}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        m = int(doc["m"])
        f = tuple(cyclo_from_str(s, m) for s in doc["f"])
        bad = {
            int(p): [cyclo_from_str(s, m) for s in poly]
            for p, poly in doc.get("bad_primes", {}).items()
        }
        cond = doc.get("conductor", 1)
        if isinstance(cond, dict):
            cond = {int(p): (int(lo), int(hi)) for p, (lo, hi) in cond.items()}
        else:
            cond = int(cond)
        return cls(
            m=m,
            f=f,
            k=int(doc["k"]),
            bad_primes=bad,
            conductor=cond,
            digits=int(doc.get("digits", 8)),
            coeffs=None if doc.get("coeffs") is None else int(doc["coeffs"]),
            seed=int(doc.get("seed", 0)),
        )

    def to_json(self) -> str:
        doc = {
            "m": self.m,
            "f": [cyclo_to_str(c) for c in self.f],
            "k": self.k,
            "bad_primes": {
                str(p): [cyclo_to_str(c) for c in poly]
                for p, poly in sorted(self.bad_primes.items())
            },
            "conductor": (
                self.conductor
                if isinstance(self.conductor, int)
                else {str(p): list(r) for p, r in sorted(self.conductor.items())}
            ),
            "digits": self.digits,
            "coeffs": self.coeffs,
            "seed": self.seed,
        }
        return json.dumps(doc, indent=2) + "\n"

    def with_overrides(self, **kw) -> "CurveConfig":
        """Copy with CLI flag overrides (ignores None values)."""
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def load_config(path) -> CurveConfig:
    return CurveConfig.from_json(Path(path).read_text())


# ---------------------------------------------------------------------------
# Euler-factor disk cache


class FactorCache:
    """Plain-text store of exact local factors, one line per (ideal, k).

    Line format: "p f zeta k : c_0 | c_1 | ..." where p is the rational
    prime, f the residue degree, zeta the residue image of zeta_m naming
    the ideal (0 for ramified ideals), k the character index, and the
    c_i the factor's coefficients in the `cyclo_to_str` encoding.  Text
    so the cache diffs cleanly and ports across implementations.
    """

    def __init__(self, path=None, m: int = 3):
        self.path = Path(path) if path is not None else None
        self.m = m
        self.entries: dict = {}
        if self.path is not None and self.path.exists():
            self._read(self.path.read_text())

    @staticmethod
    def key(P, k: int) -> tuple:
        return (P.p, P.f, 0 if P.ramified else P.zeta_image, k)

    def _read(self, text: str) -> None:
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, _, body = line.partition(":")
            p, f, zeta_img, k = (int(tok) for tok in head.split())
            coeffs = tuple(
                cyclo_from_str(tok.strip(), self.m) for tok in body.split("|")
            )
            self.entries[(p, f, zeta_img, k)] = coeffs

    def get(self, P, k: int):
        return self.entries.get(self.key(P, k))

    def put(self, P, k: int, coeffs) -> None:
        key = self.key(P, k)
        coeffs = tuple(coeffs)
        if self.entries.get(key) == coeffs:
            return
        self.entries[key] = coeffs
        if self.path is not None:
            with self.path.open("a") as fh:
                fh.write(self.format_line(key, coeffs))

    @staticmethod
    def format_line(key, coeffs) -> str:
        head = " ".join(str(v) for v in key)
        body = " | ".join(cyclo_to_str(c) for c in coeffs)
        return f"{head} : {body}\n"

    def dump(self) -> str:
        return "".join(
            self.format_line(key, coeffs)
            for key, coeffs in sorted(self.entries.items())
        )
