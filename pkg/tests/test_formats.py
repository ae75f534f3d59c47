from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spx import (SpxSyntaxError, Assignment, brute_force_minimum,
                 evaluate_csp, format_rational, gen_planted_csp,
                 gen_random_csp, gen_random_lin2, import_dimacs_cnf,
                 parse_instance, parse_rational, parity_family,
                 sat_clause_family, write_instance)

DIMACS = "c test\np cnf 8 12\n" + "\n".join(
    f"{a} {b} {c} 0" for a, b, c in [
        (1, 2, 3), (-1, 4, 5), (2, -5, 6), (-3, -6, 7), (4, 6, -8),
        (1, -2, 8), (-4, -7, 8), (3, 5, -6), (-1, -5, -8), (2, 7, -3),
        (5, -6, -7), (1, 3, 8)]) + "\n"


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7") == Fraction(-7)
    for bad in ("1.5", "1e3", "a/b", "1/0"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_format_rational_round_trip():
    for v in (Fraction(3, 4), Fraction(-7), Fraction(0), Fraction(22, 7)):
        assert parse_rational(format_rational(v)) == v


@settings(deadline=None, max_examples=50)
@given(seed=st.integers(0, 10 ** 6))
def test_lin2_round_trip(seed):
    inst = gen_random_lin2(12, 3, 18, (-1, 1, Fraction(3, 7)), seed)
    assert parse_instance(write_instance(inst)) == inst


@settings(deadline=None, max_examples=50)
@given(seed=st.integers(0, 10 ** 6))
def test_csp_round_trip(seed):
    inst = gen_random_csp(12, 3, 18, sat_clause_family(3), seed,
                          weight_choices=(1, Fraction(5, 2)))
    assert parse_instance(write_instance(inst)) == inst


def test_parse_errors_carry_line_numbers():
    with pytest.raises(SpxSyntaxError) as exc:
        parse_instance("p lin2 4 2 1\nt 1.5 1 2\n")
    assert exc.value.line_no == 2
    with pytest.raises(SpxSyntaxError):
        parse_instance("p lin2 4 2 2\nt 1 1 2\n")  # missing term
    with pytest.raises(SpxSyntaxError):
        parse_instance("q lin2 4 2 0\n")  # bad header


def test_dimacs_max_e3_sat_identity():
    # For unit clauses: H = 7m - 8m*, with m* the satisfied-clause count
    # at the optimum.
    inst = import_dimacs_cnf(DIMACS)
    assert inst.m == 12
    res = brute_force_minimum(inst)
    assert res.h_min == Fraction(-12)  # frozen oracle value
    best = res.minimizers[0]
    m_star = sum(1 for c in inst.constraints if c.is_satisfied(best))
    assert res.h_min == 7 * inst.m - 8 * m_star


def test_dimacs_rejects_tautology_and_arity():
    with pytest.raises(SpxSyntaxError):
        import_dimacs_cnf("p cnf 3 1\n1 -1 2 0\n")
    with pytest.raises(SpxSyntaxError):
        import_dimacs_cnf("p cnf 5 1\n1 2 3 4 0\n", k=3)


def test_generators_deterministic():
    a = gen_random_lin2(10, 3, 15, (-1, 1), 42)
    b = gen_random_lin2(10, 3, 15, (-1, 1), 42)
    c = gen_random_lin2(10, 3, 15, (-1, 1), 43)
    assert a == b
    assert a != c


def test_planted_csp_reaches_floor():
    planted = Assignment.from_mask(0b1010101010, 10)
    inst = gen_planted_csp(10, 3, 15, sat_clause_family(3), planted, 7,
                           weight_choices=(1, 2))
    assert evaluate_csp(inst, planted) == -inst.total_weight
    assert brute_force_minimum(inst).h_min == -inst.total_weight
