"""Instance serialization, DIMACS import, and seeded generators.

The native ``.spx`` text format is line-oriented:

    p lin2 <n> <k> <m>          header for a degree-k form
    t <coeff> i1 ... ik         one monomial per line

    p csp <n> <k> <m>           header for a weighted CSP
    c <weight> <hex-table> v1 ... vkj

Coefficients and weights are exact rationals written as ``p/q`` or
integers; floating-point input is rejected.  Truth tables are lowercase
hex over the 2^{k_j} local assignments, where bit b encodes the local
assignment in which variable ``vars[t]`` has sign -1 iff bit t of b is 1
(sign +1 maps to bit 0).  ``#`` starts a comment line.

Generators use ``random.Random`` (the Mersenne Twister) seeded with the
caller's seed, so outputs are reproducible across runs and releases.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from math import comb

from .instances import (Assignment, Constraint, CspInstance, InstanceStats,
                        Lin2Instance, evaluate_csp)


class SpxSyntaxError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_rational(token: str) -> Fraction:
    """Parse an exact rational 'p/q' or integer token; floats rejected."""
    if "." in token or "e" in token.lower():
        raise ValueError(f"floating-point literal {token!r} rejected; use p/q rationals")
    if "/" in token:
        num, den = token.split("/", 1)
        if int(den) == 0:
            raise ValueError(f"zero denominator in {token!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(token))


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _lines(text) -> list[str]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return text.splitlines()


def parse_instance(text):
    """Parse ``.spx`` text into a Lin2Instance or CspInstance."""
    kind = None
    n = k = m = None
    terms = []
    constraints = []
    for line_no, raw in enumerate(_lines(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if kind is not None:
                raise SpxSyntaxError(line_no, "duplicate header")
            if len(tokens) != 5 or tokens[1] not in ("lin2", "csp"):
                raise SpxSyntaxError(line_no, f"malformed header {line!r}")
            kind = tokens[1]
            try:
                n, k, m = int(tokens[2]), int(tokens[3]), int(tokens[4])
            except ValueError:
                raise SpxSyntaxError(line_no, "header fields must be integers")
            continue
        if kind is None:
            raise SpxSyntaxError(line_no, "body line before header")
        if kind == "lin2":
            if tokens[0] != "t":
                raise SpxSyntaxError(line_no, f"expected 't' line, got {tokens[0]!r}")
            if len(tokens) != 2 + k:
                raise SpxSyntaxError(line_no, f"term must have exactly k={k} indices")
            try:
                coeff = parse_rational(tokens[1])
                indices = [int(tok) for tok in tokens[2:]]
            except ValueError as exc:
                raise SpxSyntaxError(line_no, str(exc))
            terms.append((indices, coeff))
        else:
            if tokens[0] != "c":
                raise SpxSyntaxError(line_no, f"expected 'c' line, got {tokens[0]!r}")
            if len(tokens) < 4:
                raise SpxSyntaxError(line_no, "constraint needs weight, table, variables")
            try:
                weight = parse_rational(tokens[1])
                table = int(tokens[2], 16)
                cvars = tuple(int(tok) for tok in tokens[3:])
            except ValueError as exc:
                raise SpxSyntaxError(line_no, str(exc))
            try:
                constraints.append(Constraint(vars=cvars, weight=weight, truth_table=table))
            except ValueError as exc:
                raise SpxSyntaxError(line_no, f"constraint {len(constraints) + 1}: {exc}")
    if kind is None:
        raise SpxSyntaxError(0, "missing header")
    if kind == "lin2":
        if len(terms) != m:
            raise SpxSyntaxError(0, f"header declares m={m} terms, found {len(terms)}")
        return Lin2Instance.from_terms(n, k, terms)
    if len(constraints) != m:
        raise SpxSyntaxError(0, f"header declares m={m} constraints, found {len(constraints)}")
    return CspInstance(n=n, k=k, constraints=tuple(constraints))


def write_instance(inst) -> str:
    out = []
    if isinstance(inst, Lin2Instance):
        out.append(f"p lin2 {inst.n} {inst.k} {len(inst.terms)}")
        for subset, coeff in inst.terms:
            idx = " ".join(str(i) for i in sorted(subset))
            out.append(f"t {format_rational(coeff)} {idx}")
    else:
        out.append(f"p csp {inst.n} {inst.k} {inst.m}")
        for c in inst.constraints:
            digits = max(1, (1 << c.arity) // 4)
            table = format(c.truth_table, f"0{digits}x")
            idx = " ".join(str(v) for v in c.vars)
            out.append(f"c {format_rational(c.weight)} {table} {idx}")
    return "\n".join(out) + "\n"


def import_dimacs_cnf(text, k: int = 3) -> CspInstance:
    """Import a DIMACS CNF as unit-weight OR-clause constraints.

    A positive literal is satisfied by sign +1, a negative literal by
    sign -1; each clause's truth table excludes only the all-false local
    assignment, so s_j = 2^{k_j} - 1.
    """
    n = None
    constraints = []
    pending: list[int] = []
    for line_no, raw in enumerate(_lines(text), start=1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            tokens = line.split()
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise SpxSyntaxError(line_no, f"malformed DIMACS header {line!r}")
            n = int(tokens[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                constraints.append(_clause_constraint(pending, k, line_no))
                pending = []
            else:
                pending.append(lit)
    if pending:
        constraints.append(_clause_constraint(pending, k, line_no))
    if n is None:
        n = max((max(abs(v) for v in c.vars) for c in constraints), default=0)
    return CspInstance(n=n, k=k, constraints=tuple(constraints))


def _clause_constraint(lits: list[int], k: int, line_no: int) -> Constraint:
    seen: dict[int, int] = {}
    for lit in lits:
        v = abs(lit)
        if v in seen:
            if seen[v] != lit:
                raise SpxSyntaxError(line_no, f"tautological clause on variable {v}")
        else:
            seen[v] = lit
    ordered = list(seen.values())
    if not ordered:
        raise SpxSyntaxError(line_no, "empty clause")
    if len(ordered) > k:
        raise SpxSyntaxError(line_no, f"clause arity {len(ordered)} exceeds k={k}")
    # The single unsatisfying local assignment has every literal false.
    unsat = 0
    for t, lit in enumerate(ordered):
        if lit > 0:
            unsat |= 1 << t
    arity = len(ordered)
    table = ((1 << (1 << arity)) - 1) ^ (1 << unsat)
    return Constraint(
        vars=tuple(abs(lit) for lit in ordered),
        weight=Fraction(1),
        truth_table=table,
    )


def sat_clause_family(k: int) -> tuple[int, ...]:
    """All OR-clause truth tables of arity k (s = 2^k - 1)."""
    full = (1 << (1 << k)) - 1
    return tuple(full ^ (1 << b) for b in range(1 << k))


def parity_family(k: int) -> tuple[int, ...]:
    """The two parity truth tables of arity k (s = 2^{k-1})."""
    even = 0
    for b in range(1 << k):
        if bin(b).count("1") % 2 == 0:
            even |= 1 << b
    full = (1 << (1 << k)) - 1
    return (even, full ^ even)


def gen_random_lin2(n: int, k: int, m: int, coeff_set, seed) -> Lin2Instance:
    """m distinct uniform k-subsets with coefficients from coeff_set."""
    coeffs = [Fraction(c) for c in coeff_set]
    if not coeffs or any(c == 0 for c in coeffs):
        raise ValueError("coeff_set must be nonempty and exclude 0")
    if m > comb(n, k):
        raise ValueError(f"m={m} exceeds the number of k-subsets C({n},{k})")
    rng = random.Random(seed)
    chosen: set[frozenset[int]] = set()
    terms = []
    while len(terms) < m:
        subset = frozenset(rng.sample(range(1, n + 1), k))
        if subset in chosen:
            continue
        chosen.add(subset)
        terms.append((subset, rng.choice(coeffs)))
    return Lin2Instance.from_terms(n, k, terms)


def _plant_table(table: int, arity: int, planted_local: int, rng: random.Random) -> int:
    """XOR-translate a truth table so the planted local assignment is
    satisfied; this flips literal polarities, preserving s_j."""
    satisfied = [b for b in range(1 << arity) if (table >> b) & 1]
    target = rng.choice(satisfied)
    shift = planted_local ^ target
    out = 0
    for b in range(1 << arity):
        if (table >> (b ^ shift)) & 1:
            out |= 1 << b
    return out


def gen_planted_csp(n: int, k: int, m: int, predicate_family, planted: Assignment,
                    seed, weight_choices=(Fraction(1),)) -> CspInstance:
    """Random CSP in which every constraint is satisfied by ``planted``,
    so H(planted) = -W = H_min."""
    family = tuple(predicate_family)
    weights = [Fraction(w) for w in weight_choices]
    rng = random.Random(seed)
    constraints = []
    for _ in range(m):
        cvars = tuple(rng.sample(range(1, n + 1), k))
        local = 0
        for t, v in enumerate(cvars):
            if planted.signs[v - 1] == -1:
                local |= 1 << t
        table = _plant_table(rng.choice(family), k, local, rng)
        constraints.append(Constraint(vars=cvars, weight=rng.choice(weights),
                                      truth_table=table))
    inst = CspInstance(n=n, k=k, constraints=tuple(constraints))
    assert evaluate_csp(inst, planted) == -inst.total_weight
    return inst


def gen_random_csp(n: int, k: int, m: int, predicate_family, seed,
                   weight_choices=(Fraction(1),)) -> CspInstance:
    """Random CSP with uniform variable tuples, predicates, and weights."""
    family = tuple(predicate_family)
    weights = [Fraction(w) for w in weight_choices]
    rng = random.Random(seed)
    constraints = []
    for _ in range(m):
        cvars = tuple(rng.sample(range(1, n + 1), k))
        constraints.append(Constraint(vars=cvars, weight=rng.choice(weights),
                                      truth_table=rng.choice(family)))
    return CspInstance(n=n, k=k, constraints=tuple(constraints))


def instance_to_json(inst) -> dict:
    if isinstance(inst, Lin2Instance):
        return {
            "kind": "lin2",
            "n": inst.n,
            "k": inst.k,
            "m": len(inst.terms),
            "terms": [
                {"vars": sorted(subset), "coeff": format_rational(coeff)}
                for subset, coeff in inst.terms
            ],
        }
    return {
        "kind": "csp",
        "n": inst.n,
        "k": inst.k,
        "m": inst.m,
        "constraints": [
            {"vars": list(c.vars), "weight": format_rational(c.weight),
             "table": format(c.truth_table, "x")}
            for c in inst.constraints
        ],
    }


def stats_to_json(stats: InstanceStats) -> dict:
    return {
        "n": stats.n,
        "W": format_rational(stats.total_weight),
        "Sigma": format_rational(stats.incident_weight),
        "d_avg": format_rational(stats.avg_degree),
        "D": format_rational(stats.irregularity),
        "D_float": float(stats.irregularity),
        "Lambda_max": format_rational(stats.lambda_max),
        "light_set": sorted(stats.light_set),
    }


def dump_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
