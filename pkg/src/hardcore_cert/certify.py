"""Symbolic dual certificates for the configuration LPs.

A certificate fixes the dual variables as rational functions of the fugacity
on an interval.  It is valid when every configuration's slack is
nonnegative there.  Slacks are never reduced: with ``M`` the product of the
certificate's positive denominator factors,

    slack(C) = N(C) / (3 * Z(C) * M)

where ``N(C)`` is a polynomial built from integer data.  ``Z(C)`` has
positive coefficients and each factor of ``M`` is checked positive on the
interval once, so the sign of the slack is the sign of ``N(C)``.  On a
bounded interval ``N`` is pulled back along ``(a + b t) / (1 + t)`` and
checked on ``t >= 0``.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

from gmpy2 import mpq

from .exactmath import (
    NonnegVerdict,
    Poly,
    RatFunc,
    Scalar,
    mobius_substitute,
    nonneg_on_halfline,
    parse_rational,
    poly_div_exact,
    poly_parse,
    poly_serialize,
)
from .localview import (
    Configuration,
    alpha,
    enumerate_configurations,
    gamma,
    raw_functions,
)
from .lp import build_lp, constraint_rank, reduced_costs, solve_exact

DEFAULT_POLYA_LIMIT = 64


class CertificateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DualCertificate:
    name: str
    girth_class: int
    sense: str
    target_alpha: RatFunc
    lambdas: tuple[RatFunc, RatFunc, RatFunc]
    interval: tuple[Scalar, Scalar | None]
    substitution: tuple[Scalar, Scalar] | None
    positive_denominator_factors: tuple[Poly, ...]
    scaling: Poly | None = None
    expected_tight: tuple[str, ...] = ()
    samples: tuple[mpq, ...] = ()

    def __post_init__(self):
        a, b = self.interval
        if b is not None and not a < b:
            raise CertificateFormatError(f"{self.name}: empty interval")
        m = self.denominator_product()
        for f in (self.target_alpha, *self.lambdas):
            poly_div_exact(m, f.den)

    @property
    def field_tag(self) -> str:
        ends = [x for x in self.interval if x is not None]
        return "Q" if all(x.is_rational() for x in ends) else "Q(sqrt15)"

    def denominator_product(self) -> Poly:
        m = Poly([1])
        for f in self.positive_denominator_factors:
            m = m * f
        return m

    def lambda_p(self) -> RatFunc:
        """Value of the normalisation dual, which is the bound itself."""
        return self.target_alpha

    def serialize(self) -> str:
        return format_certificate(self)


# ---------------------------------------------------------------- file format


def _scalar_text(x: Scalar | None) -> str:
    return "inf" if x is None else x.serialize()


def _parse_end(tok: str) -> Scalar | None:
    return None if tok == "inf" else Scalar.parse(tok)


def format_certificate(c: DualCertificate) -> str:
    lines = [f"name {c.name}", f"girth {c.girth_class}", f"sense {c.sense}"]
    lines.append(f"interval {_scalar_text(c.interval[0])} {_scalar_text(c.interval[1])}")
    sub = "none" if c.substitution is None else " ".join(x.serialize() for x in c.substitution)
    lines.append(f"substitution {sub}")
    lines.append("target.num " + poly_serialize(c.target_alpha.num))
    lines.append("target.den " + poly_serialize(c.target_alpha.den))
    for i, lam in enumerate(c.lambdas):
        lines.append(f"lambda{i}.num " + poly_serialize(lam.num))
        lines.append(f"lambda{i}.den " + poly_serialize(lam.den))
    lines += ["factor " + poly_serialize(f) for f in c.positive_denominator_factors]
    if c.scaling is not None:
        lines.append("scaling " + poly_serialize(c.scaling))
    lines += [f"sample {int(s.numerator)}/{int(s.denominator)}" for s in c.samples]
    lines += [f"tight {t}" for t in c.expected_tight]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, source: str = "<string>") -> DualCertificate:
    fields: dict[str, str] = {}
    factors, tight, samples = [], [], []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "factor":
            factors.append(rest)
        elif key == "tight":
            tight.append(rest)
        elif key == "sample":
            samples.append(rest)
        elif key in fields:
            raise CertificateFormatError(f"{source}:{n}: duplicate field {key}")
        else:
            fields[key] = rest
    try:
        def rf(prefix: str) -> RatFunc:
            return RatFunc(poly_parse(fields[prefix + ".num"]), poly_parse(fields[prefix + ".den"]), reduce=False)

        girth = int(fields["girth"])
        sense = fields["sense"]
        if sense not in ("max", "min"):
            raise CertificateFormatError(f"{source}: sense must be max or min")
        ends = fields["interval"].split()
        if len(ends) != 2:
            raise CertificateFormatError(f"{source}: interval needs two endpoints")
        interval = (_parse_end(ends[0]), _parse_end(ends[1]))
        sub_tok = fields.get("substitution", "none").split()
        substitution = None if sub_tok == ["none"] else (Scalar.parse(sub_tok[0]), Scalar.parse(sub_tok[1]))
        return DualCertificate(
            name=fields.get("name", Path(source).stem),
            girth_class=girth,
            sense=sense,
            target_alpha=rf("target"),
            lambdas=(rf("lambda0"), rf("lambda1"), rf("lambda2")),
            interval=interval,
            substitution=substitution,
            positive_denominator_factors=tuple(poly_parse(f) for f in factors),
            scaling=poly_parse(fields["scaling"]) if "scaling" in fields else None,
            expected_tight=tuple(tight),
            samples=tuple(parse_rational(s) for s in samples),
        )
    except KeyError as e:
        raise CertificateFormatError(f"{source}: missing field {e.args[0]}") from None
    except ArithmeticError as e:
        raise CertificateFormatError(f"{source}: denominators not covered by factors ({e})") from None


def load_certificate(path: str | Path) -> DualCertificate:
    path = Path(path)
    return parse_certificate(path.read_text(), str(path))


BUILTIN_NAMES = ("heawood-g6", "heawood-g5", "petersen-i1", "petersen-i2", "petersen-i3", "petersen-i4")


@lru_cache(maxsize=None)
def _builtin(name: str) -> DualCertificate:
    text = resources.files(__package__).joinpath("data", "certificates", f"{name}.cert").read_text()
    return parse_certificate(text, name)


def builtin_certificates() -> dict[str, DualCertificate]:
    return {n: _builtin(n) for n in BUILTIN_NAMES}


# ---------------------------------------------------------------- slacks


def _ints_poly(coeffs) -> Poly:
    return Poly.from_ints(list(coeffs))


def slack_numerator(c: Configuration, cert: DualCertificate) -> Poly:
    """``N`` with ``slack = N / (3 Z M)``, ``M`` the product of the factors."""
    r = raw_functions(c)
    m = cert.denominator_product()
    z = _ints_poly(r.z)
    t = cert.target_alpha
    n = (z * t.num * poly_div_exact(m, t.den)).scale(3) - (_ints_poly(r.z_plus) * m).scale(3)
    for k, lam in enumerate(cert.lambdas):
        if lam.num.is_zero():
            continue
        n = n + lam.num * poly_div_exact(m, lam.den) * _ints_poly(r.delta(k))
    return n if cert.sense == "max" else -n


def slack(c: Configuration, cert: DualCertificate) -> RatFunc:
    """Reduced slack, computed independently from the stored functions."""
    s = cert.target_alpha - alpha(c)
    for k, lam in enumerate(cert.lambdas):
        s = s + lam * (gamma(c, "v", k) - gamma(c, "u", k))
    return s if cert.sense == "max" else -s


def scaled_slack(c: Configuration, cert: DualCertificate) -> Poly:
    """``scaling * Z(C) * slack`` as an exact polynomial."""
    if cert.scaling is None:
        raise ValueError(f"{cert.name} has no scaling polynomial")
    n = slack_numerator(c, cert)
    return poly_div_exact(n * cert.scaling, cert.denominator_product().scale(3))


def _halfline_poly(p: Poly, cert: DualCertificate) -> Poly:
    if cert.substitution is None:
        return p
    a, b = cert.substitution
    return mobius_substitute(p, a, b)[0]


def verify_config(c: Configuration, cert: DualCertificate, polya_limit: int = DEFAULT_POLYA_LIMIT) -> NonnegVerdict:
    if cert.scaling is not None:
        return nonneg_on_halfline(scaled_slack(c, cert), polya_limit)
    return nonneg_on_halfline(_halfline_poly(slack_numerator(c, cert), cert), polya_limit)


def factor_verdicts(cert: DualCertificate, polya_limit: int = DEFAULT_POLYA_LIMIT) -> list[NonnegVerdict]:
    """Positivity of each denominator factor on the certificate's interval."""
    return [nonneg_on_halfline(_halfline_poly(f, cert), polya_limit) for f in cert.positive_denominator_factors]


# ---------------------------------------------------------------- reports


def verdict_name(v: NonnegVerdict) -> str:
    if v.kind == "IdenticallyZero":
        return "Zero"
    if v.kind == "Indeterminate":
        return "FAIL"
    return str(v)


@dataclass
class VerificationReport:
    name: str
    girth_class: int
    field_tag: str
    verdicts: list[tuple[str, str, str]]
    tight: list[str]
    expected_tight: list[str]
    tight_match: bool
    factor_verdicts: list[str]
    rank: int | None
    rank_sample: str | None
    wall_time: float = field(default=0.0, compare=False)

    @property
    def failures(self) -> list[str]:
        return [name for name, _, v in self.verdicts if v == "FAIL"]

    @property
    def passed(self) -> bool:
        factors_ok = all(v in ("NonnegCoeffs",) or v.startswith("PolyaPositive") for v in self.factor_verdicts)
        return not self.failures and self.tight_match and factors_ok

    def summary(self) -> dict:
        """Machine-readable content; deterministic (no timing)."""
        counts: dict[str, int] = {}
        for _, _, v in self.verdicts:
            k = "PolyaPositive" if v.startswith("PolyaPositive") else v
            counts[k] = counts.get(k, 0) + 1
        return {
            "name": self.name,
            "girth_class": self.girth_class,
            "field": self.field_tag,
            "passed": self.passed,
            "configurations": len(self.verdicts),
            "verdict_counts": dict(sorted(counts.items())),
            "tight": self.tight,
            "expected_tight": self.expected_tight,
            "tight_match": self.tight_match,
            "factor_verdicts": self.factor_verdicts,
            "tight_rank": self.rank,
            "rank_sample": self.rank_sample,
            "verdicts": [{"configuration": n, "key": k, "verdict": v} for n, k, v in self.verdicts],
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, ensure_ascii=False)

    def text(self, verbose: bool = False, timing: bool = False) -> str:
        s = self.summary()
        lines = [
            f"certificate {self.name}: {'PASS' if self.passed else 'FAIL'}",
            f"  girth class {self.girth_class}, field {self.field_tag}, {len(self.verdicts)} configurations",
            "  verdicts: " + ", ".join(f"{k}={v}" for k, v in s["verdict_counts"].items()),
            "  denominator factors: " + ", ".join(self.factor_verdicts),
            f"  tight set ({len(self.tight)}): " + ", ".join(self.tight),
            f"  expected ({len(self.expected_tight)}): " + ", ".join(self.expected_tight),
            f"  tight set matches: {self.tight_match}",
            f"  rank of tight rows at {self.rank_sample}: {self.rank}",
            "  right endpoint covered by continuity of the slack",
        ]
        if self.failures:
            lines.append("  failures: " + ", ".join(self.failures))
        if verbose:
            lines += [f"    {n:<28} {v}" for n, _, v in self.verdicts]
        if timing:
            lines.append(f"  wall time {self.wall_time:.2f}s")
        return "\n".join(lines)


def _verify_chunk(args) -> list[tuple[str, str]]:
    cert, confs, polya_limit = args
    return [(c.view_key, str(verify_config(c, cert, polya_limit))) for c in confs]


def _verdict_from_text(s: str) -> str:
    if s == "IdenticallyZero":
        return "Zero"
    if s == "Indeterminate":
        return "FAIL"
    return s


def verify_certificate(
    cert: DualCertificate,
    configurations: Sequence[Configuration] | None = None,
    polya_limit: int = DEFAULT_POLYA_LIMIT,
    threads: int = 1,
) -> VerificationReport:
    start = time.perf_counter()
    confs = list(configurations) if configurations is not None else enumerate_configurations(cert.girth_class)
    # slacks depend only on the view, so each view is checked once
    reps: dict[str, Configuration] = {}
    for c in confs:
        reps.setdefault(c.view_key, c)
    todo = list(reps.values())
    if threads > 1 and len(todo) > 1:
        chunks = [todo[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_verify_chunk, [(cert, ch, polya_limit) for ch in chunks])
            by_view = dict(kv for part in parts for kv in part)
    else:
        by_view = dict(_verify_chunk((cert, todo, polya_limit)))
    verdicts = [(c.name, c.canon_key, _verdict_from_text(by_view[c.view_key])) for c in confs]
    tight = [n for n, _, v in verdicts if v == "Zero"]
    tight_confs = [c for c in confs if c.name in set(tight)]
    expected = list(cert.expected_tight)
    rank = sample = None
    if tight_confs and cert.samples:
        sample = cert.samples[0]
        rank = constraint_rank(tight_confs, sample)
        sample = f"{int(sample.numerator)}/{int(sample.denominator)}"
    return VerificationReport(
        name=cert.name,
        girth_class=cert.girth_class,
        field_tag=cert.field_tag,
        verdicts=verdicts,
        tight=tight,
        expected_tight=expected,
        tight_match=sorted(tight) == sorted(expected),
        factor_verdicts=[str(v) for v in factor_verdicts(cert, polya_limit)],
        rank=rank,
        rank_sample=sample,
        wall_time=time.perf_counter() - start,
    )


def verify_case(name: str, polya_limit: int = DEFAULT_POLYA_LIMIT, threads: int = 1) -> VerificationReport:
    certs = builtin_certificates()
    if name not in certs:
        raise KeyError(f"unknown certificate {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    return verify_certificate(certs[name], polya_limit=polya_limit, threads=threads)


# ---------------------------------------------------------------- duals from tight sets


class SingularSystem(ArithmeticError):
    pass


def derive_dual_from_tight(
    configs: Sequence[Configuration], target_alpha: RatFunc, fixed: dict[int, RatFunc | int] | None = None
) -> tuple[RatFunc, RatFunc, RatFunc]:
    """Dual values making each given configuration's slack vanish identically.

    Solves ``sum_t L_t (gamma_v[t] - gamma_u[t]) = alpha_C - target`` over the
    field of rational functions; the equation is the same for both senses.
    ``fixed`` pins some ``L_t`` (for instance ``{0: 0}``) and then one
    configuration per free unknown is needed.
    """
    fixed = dict(fixed or {})
    free = [t for t in range(3) if t not in fixed]
    if len(configs) != len(free):
        raise ValueError(f"need {len(free)} configurations, got {len(configs)}")
    known = {t: v if isinstance(v, RatFunc) else RatFunc(Poly([v])) for t, v in fixed.items()}
    rows = []
    for c in configs:
        deltas = [gamma(c, "v", t) - gamma(c, "u", t) for t in range(3)]
        rhs = alpha(c) - target_alpha
        for t, v in known.items():
            rhs = rhs - v * deltas[t]
        rows.append([deltas[t] for t in free] + [rhs])
    n = len(free)
    for col in range(n):
        piv = next((r for r in range(col, n) if not rows[r][col].num.is_zero()), None)
        if piv is None:
            raise SingularSystem("tight rows are linearly dependent")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and not rows[r][col].num.is_zero():
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    sol = dict(known)
    for i, t in enumerate(free):
        sol[t] = rows[i][n]
    return sol[0], sol[1], sol[2]


# ---------------------------------------------------------------- LP cross-check


def certificate_duals_at(cert: DualCertificate, lam) -> tuple[mpq, ...]:
    """``(L_p, L_0, L_1, L_2)`` evaluated at a rational point."""
    vals = [cert.lambda_p()(lam)] + [f(lam) for f in cert.lambdas]
    return tuple(v.a for v in vals)


def lp_agreement(cert: DualCertificate, lam) -> dict:
    """Compare the certificate with the exact LP at one rational fugacity."""
    lam = mpq(lam)
    prob = build_lp(cert.girth_class, lam, cert.sense)
    sol = solve_exact(prob)
    duals = certificate_duals_at(cert, lam)
    rc = reduced_costs(prob, duals)
    cert_tight = sorted(prob.columns[j].name for j, d in enumerate(rc) if d == 0)
    lp_tight = sorted(prob.columns[j].name for j, d in enumerate(reduced_costs(prob, sol.dual)) if d == 0)
    return {
        "lambda": f"{int(lam.numerator)}/{int(lam.denominator)}",
        "lp_value": sol.value,
        "certificate_value": duals[0],
        "certificate_feasible": all(d >= 0 for d in rc),
        "certificate_tight": cert_tight,
        "lp_dual_tight": lp_tight,
    }
