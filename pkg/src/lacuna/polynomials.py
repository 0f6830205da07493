"""Exact lacking polynomials.

The lacking polynomial of a sinked graph counts its stochastically recurrent
states by total lacking number, the summed per-vertex deficit below the
maximal stable configuration.  Coefficients are exact arbitrary-precision
integers throughout; closed forms are provided for the K_{2,n} and K_{m,2}
families.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnstableConfigurationError
from .graphs import BipartiteSpec, Configuration, Graph, is_stable, make_complete_bipartite
from .orientations import sto_by_union
from .recurrence import LevelHistogram, sto_bipartite_symmetric, sto_fast


def level(g: Graph, c: Configuration) -> int:
    """Total lacking number of a stable configuration: sum of degree - grains - 1."""
    if not is_stable(g, c):
        raise UnstableConfigurationError(f"configuration {c} is not stable on this graph")
    degrees = g.degrees
    return sum(degrees[v] - c[i] - 1 for i, v in enumerate(g.non_sink_vertices))


@dataclass(frozen=True)
class LackingPolynomial:
    """Coefficient vector indexed by total lacking number, trailing zeros trimmed."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = list(self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [0]
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, point: int | Fraction) -> int | Fraction:
        """Exact Horner evaluation."""
        value: int | Fraction = 0
        for c in reversed(self.coefficients):
            value = value * point + c
        return value

    def to_text(self) -> str:
        """Human-readable form like "1 + 5x + 15x^2"."""
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0 and self.degree > 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                lead = "" if c == 1 else str(c)
                power = "x" if k == 1 else f"x^{k}"
                terms.append(f"{lead}{power}")
        return " + ".join(terms) if terms else "0"

    def to_json_dict(self, graph_label: str) -> dict:
        """Serialization with decimal-string coefficients (precision safe)."""
        return {
            "graph": graph_label,
            "coeffs": [str(c) for c in self.coefficients],
        }


def from_histogram(histogram: LevelHistogram) -> LackingPolynomial:
    return LackingPolynomial(coefficients=histogram.counts)


def polynomial_from_json(text: str) -> tuple[str, LackingPolynomial]:
    data = json.loads(text)
    coeffs = tuple(int(c) for c in data["coeffs"])
    return data["graph"], LackingPolynomial(coefficients=coeffs)


def lacking_polynomial(
    g: Graph, *, engine: str = "flow", workers: int = 1
) -> LackingPolynomial:
    """The lacking polynomial of a graph.

    engine "flow" sweeps stable configurations through the flow decider;
    engine "oracle" unions comp boxes over all orientations (edge cap applies).
    """
    if engine == "flow":
        histogram = sto_fast(g, workers=workers)
        return from_histogram(histogram)
    if engine == "oracle":
        configs = sto_by_union(g, workers=workers)
        total_bound = g.total_lacking_bound()
        counts = [0] * (total_bound + 1)
        for c in configs:
            counts[total_bound - sum(c)] += 1
        return LackingPolynomial(coefficients=tuple(counts))
    raise ValueError(f"unknown engine {engine!r}")


def lacking_polynomial_bipartite(
    spec: BipartiteSpec, *, workers: int = 1
) -> LackingPolynomial:
    """Symmetry-reduced computation for complete bipartite graphs."""
    return from_histogram(sto_bipartite_symmetric(spec, workers=workers))


def closed_form_2n(n: int) -> LackingPolynomial:
    """Lacking polynomial of K_{2,n}: coefficient k is the running binomial
    partial sum T(n,k) = C(n,0) + ... + C(n,k), for k up to n-1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    coeffs = []
    binomial = 1
    running = 0
    for k in range(n):
        running += binomial
        coeffs.append(running)
        binomial = binomial * (n - k) // (k + 1)
    return LackingPolynomial(coefficients=tuple(coeffs))


def closed_form_m2(m: int) -> LackingPolynomial:
    """Lacking polynomial of K_{m,2}: coefficient k is the doubly-iterated
    binomial partial sum S(m-1,k), for k up to m-1."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    coeffs = []
    binomial = 1
    once = 0
    twice = 0
    for k in range(m):
        once += binomial
        twice += once
        coeffs.append(twice)
        binomial = binomial * (m - 1 - k) // (k + 1)
    return LackingPolynomial(coefficients=tuple(coeffs))


def reverse_coefficients(p: LackingPolynomial, top_degree: int) -> tuple[int, ...]:
    """Coefficient vector of the level polynomial over Sto: index j maps to
    coefficient top_degree - j, zero padded above the polynomial degree."""
    if top_degree < p.degree:
        raise ValueError(
            f"top_degree {top_degree} below polynomial degree {p.degree}"
        )
    padded = list(p.coefficients) + [0] * (top_degree - p.degree)
    return tuple(reversed(padded))


def lacking_polynomial_auto(
    source: Graph | BipartiteSpec, *, engine: str = "auto", workers: int = 1
) -> tuple[LackingPolynomial, str]:
    """Engine dispatch used by the CLI; returns the polynomial and engine name.

    "auto" picks the symmetric engine for bipartite specs and the flow engine
    for explicit graphs.
    """
    if isinstance(source, BipartiteSpec):
        if engine in ("auto", "symmetric"):
            return lacking_polynomial_bipartite(source, workers=workers), "symmetric"
        g = make_complete_bipartite(source)
        return lacking_polynomial(g, engine=engine, workers=workers), engine
    if engine in ("auto", "flow"):
        return lacking_polynomial(source, engine="flow", workers=workers), "flow"
    if engine == "oracle":
        return lacking_polynomial(source, engine="oracle", workers=workers), "oracle"
    raise ValueError(f"engine {engine!r} is not applicable to an explicit graph")
