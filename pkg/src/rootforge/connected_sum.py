"""Correction terms of connected sums.

Sums of positively oriented AR manifolds go through closed formulas in the
monotone parameters.  Anything involving a reversed orientation is computed
by the complex engine: dualise, tensor, take the cone.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import ceil
from typing import List, Optional, Tuple

from . import errors
from .graded_root import MonotoneRoot, monotone_params
from .iota_complex import (
    IotaComplex,
    InvolutiveInvariants,
    connected_sum_complex,
    dual,
    involutive_invariants,
    monotone_complex,
    s3_complex,
)


@dataclass(frozen=True)
class OrientedSummand:
    params: Optional[MonotoneRoot] = None
    complex: Optional[IotaComplex] = None
    positive: bool = True
    label: str = ""

    def __post_init__(self):
        if self.params is None and self.complex is None:
            raise errors.InputError("a summand needs monotone parameters or a complex")

    def iota_complex(self):
        C = self.complex if self.complex is not None else monotone_complex(self.params)
        return C if self.positive else dual(C)


@dataclass(frozen=True)
class SumSpec:
    summands: Tuple[OrientedSummand, ...]

    def __post_init__(self):
        if not self.summands:
            raise errors.InputError("a connected sum needs at least one summand")

    @classmethod
    def of(cls, *items):
        out = []
        for it in items:
            if isinstance(it, OrientedSummand):
                out.append(it)
            else:
                out.append(OrientedSummand(params=it))
        return cls(tuple(out))


def _positive_params(spec):
    out = []
    for s in spec.summands:
        if not s.positive:
            raise errors.MixedOrientationNotAllowedHere("reversed summands need mixed_sum_invariants")
        if s.params is None:
            raise errors.MixedOrientationNotAllowedHere("formula path needs monotone parameters")
        out.append(monotone_params(s.params))
    return out


def sum_correction_terms(spec):
    """(d-underline, d, d-bar) of a sum of positively oriented summands."""
    if not isinstance(spec, SumSpec):
        spec = SumSpec.of(*spec)
    ps = _positive_params(spec)
    d = sum((p.d[0] for p in ps), Fraction(0))
    best = None
    for tup in product(*(range(p.n) for p in ps)):
        val = sum(p.d[s] for p, s in zip(ps, tup)) - max(p.two_delta_tilde[s] for p, s in zip(ps, tup))
        if best is None or val > best:
            best = val
    return InvolutiveInvariants(best, d, d)


@dataclass(frozen=True)
class SelfSum:
    k: int
    d_lower: Fraction
    threshold: int


def self_sum(params, k):
    """d-underline of the k-fold self sum and the k past which index 1 wins."""
    if k < 1:
        raise errors.InputError("k must be at least 1")
    p = monotone_params(params)
    val = max(k * p.d[i] - p.two_delta_tilde[i] for i in range(p.n))
    kstar = 1
    for i in range(1, p.n):
        need = ceil((p.two_delta_tilde[0] - p.two_delta_tilde[i]) / (p.d[0] - p.d[i]))
        kstar = max(kstar, need)
    return SelfSum(k, val, kstar)


def mixed_sum_invariants(spec):
    if not isinstance(spec, SumSpec):
        spec = SumSpec.of(*spec)
    cs = [s.iota_complex() for s in spec.summands]
    C = cs[0] if len(cs) == 1 else connected_sum_complex(*cs)
    return involutive_invariants(C)


def d_lower_bound(params_list, last):
    """Upper bound for d-underline: sum of the other d's minus 2 mu-bar of ``last``."""
    ps = [monotone_params(P) for P in params_list]
    others = sum((p.d[0] for i, p in enumerate(ps) if i != last), Fraction(0))
    return others - 2 * ps[last].mu_bar[-1]


@dataclass
class Certificate:
    holds: bool
    max_len: int
    checked: int
    gaps: dict = field(default_factory=dict)  # multiset -> d-bar minus d-underline
    counterexamples: List[Tuple[tuple, tuple]] = field(default_factory=list)


def _check_family(family):
    ps = [monotone_params(P) for P in family]
    problems = []
    if any(not p.projective for p in ps):
        problems.append("every member must be of projective type")
    ds = [p.d[0] for p in ps]
    if len(set(ds)) != len(ds):
        problems.append("d values must be pairwise distinct")
    if len({p.mu_bar[0] for p in ps}) > 1:
        problems.append("all members must share the same mu-bar")
    if problems:
        raise errors.HypothesesNotMet("; ".join(problems))
    return ps


def independence_certificate(family, max_len=3):
    """Check that no relation between sums of length <= max_len survives d-bar minus d-underline.

    A relation pairs two multisets of family indices with disjoint supports;
    the empty multiset stands for S^3.
    """
    family = list(family)
    _check_family(family)
    idx = range(len(family))
    multisets = [()]
    for size in range(1, max_len + 1):
        multisets.extend(combinations_with_replacement(idx, size))
    gaps = {}
    for ms in multisets:
        if not ms:
            gaps[ms] = Fraction(0)
        else:
            inv = sum_correction_terms(SumSpec.of(*(family[i] for i in ms)))
            gaps[ms] = inv.d_upper - inv.d_lower
    checked = 0
    bad = []
    for i, a in enumerate(multisets):
        for b in multisets[i + 1:]:
            if set(a) & set(b):
                continue
            checked += 1
            if gaps[a] == gaps[b]:
                bad.append((a, b))
    return Certificate(not bad, max_len, checked, gaps, bad)


def s3_summand():
    return OrientedSummand(complex=s3_complex(), label="S3")
