from fractions import Fraction as F

import pytest

from conftest import F_PARAMS, FIXTURES, G_PARAMS, T_PARAMS, ctx
from hypmodp.errors import NotPIntegral
from hypmodp.hypergeometric import PrimeContext, coeff_valuation, parse_params
from hypmodp.structure import (
    Partition,
    admissible_set,
    check_p_property,
    dwork_orbits,
    exponent_set,
    level_context,
    partition,
    partition_transport_holds,
    shifted_params,
    sigma_map,
    tau_map,
)


def s_size(c):
    return len(admissible_set(c).S)


class TestSets:
    def test_exponent_examples(self):
        assert exponent_set(ctx(F_PARAMS, 13)) == [0, 6]
        assert exponent_set(ctx(G_PARAMS, 17)) == [0, 12]
        for p in (3, 5, 7, 11, 101):
            assert exponent_set(ctx(T_PARAMS, p)) == [0]

    def test_admissible_examples(self):
        assert admissible_set(ctx(F_PARAMS, 37)).S == (0, 16)
        assert admissible_set(ctx(G_PARAMS, 17)).S == (0,)
        sets = admissible_set(ctx(G_PARAMS, 19))
        assert sets.S == (0, 7) and sets.t == 1

    def test_next_exponent(self):
        sets = admissible_set(ctx(F_PARAMS, 37))
        assert sets.next_exponent(0, 37) == 16 and sets.next_exponent(16, 37) == 37

    @pytest.mark.parametrize("name,params,p", FIXTURES)
    def test_invariants(self, name, params, p):
        c = ctx(params, p)
        sets = admissible_set(c)
        assert sets.E[0] == 0 and sets.S[0] == 0
        assert set(sets.S) <= set(sets.E) and list(sets.E) == sorted(sets.E)
        assert len(sets.S) <= c.sys.n
        assert all(coeff_valuation(c, r) == 0 for r in sets.S)

    def test_not_integral(self):
        with pytest.raises(NotPIntegral):
            admissible_set(ctx(F_PARAMS, 17))

    def test_degenerate_single_parameter(self):
        c = PrimeContext(parse_params("1/2", ""), 7)
        sets = admissible_set(c)
        assert sets.E == (0,) and sets.S == (0,)
        assert partition(c.sys.alpha, 3, 7) == Partition(frozenset(), frozenset({1}))
        assert partition(c.sys.alpha, 4, 7) == Partition(frozenset({1}), frozenset())


class TestPartition:
    def test_examples(self):
        f = ctx(F_PARAMS, 13).sys
        assert partition(f.alpha, 0, 13) == Partition(frozenset(), frozenset({1, 2}))
        assert partition(f.alpha, 6, 13) == Partition(frozenset({1}), frozenset({2}))
        assert partition(f.beta, 6, 13) == Partition(frozenset({1}), frozenset({2}))

    def test_last_beta_never_divisible(self):
        g = ctx(G_PARAMS, 19).sys
        for r in range(19):
            assert 3 in partition(g.beta, r, 19).C

    def test_range(self):
        with pytest.raises(ValueError):
            partition([F(1, 2)], 13, 13)


class TestShifted:
    def test_plain_image_at_zero(self):
        c = ctx(G_PARAMS, 17)
        assert shifted_params(c, 1, 0) == c.dwork_system(1)
        assert shifted_params(c, 2, 0).key == c.sys.key

    def test_examples(self):
        assert shifted_params(ctx(F_PARAMS, 37), 1, 1) == parse_params("4/3,1/2", "17/12,1")
        assert shifted_params(ctx(G_PARAMS, 19), 1, 1) == parse_params("10/9,4/9,5/9", "4/3,1,1")

    def test_bad_index(self):
        with pytest.raises(ValueError):
            shifted_params(ctx(G_PARAMS, 17), 1, 1)


class TestSigmaTau:
    def test_identity_at_zero(self):
        c = ctx(F_PARAMS, 37)
        assert sigma_map(c, 1, 0) == {0: 0, 16: 16}

    def test_example(self):
        c = ctx(F_PARAMS, 13)
        assert tau_map(c, 1, 1) == {0: 0, 6: 5}
        assert admissible_set(c.with_system(shifted_params(c, 1, 1))).S == (0, 5)

    @pytest.mark.parametrize("name,params,p", FIXTURES)
    def test_inverse_and_transport(self, name, params, p):
        c = ctx(params, p)
        for a in range(1, c.l + 1):
            for i in range(s_size(level_context(c, a - 1))):
                sigma, tau = sigma_map(c, a, i), tau_map(c, a, i)
                assert all(sigma[tau[r]] == r for r in tau)
                assert all(tau[sigma[r]] == r for r in sigma)
                assert len(sigma) == s_size(c.with_system(c.dwork_system(a)))
                assert partition_transport_holds(c, a, i)


class TestHypotheses:
    def test_f37_passes(self):
        report = check_p_property(ctx(F_PARAMS, 37))
        assert report.main_hypotheses and not report.violations

    def test_f13_fails_p5_only(self):
        report = check_p_property(ctx(F_PARAMS, 13))
        assert report.verdicts == {"P1": True, "P2": True, "P3": True, "P4": True, "P5": False}
        assert any("13/12" in v for v in report.violations)

    def test_g17_passes(self):
        report = check_p_property(ctx(G_PARAMS, 17))
        assert report.l == 2 and report.main_hypotheses

    def test_reports_every_violation(self):
        report = check_p_property(ctx(F_PARAMS, 7))
        failed = {k for k, v in report.verdicts.items() if not v}
        assert failed == {"P2", "P3", "P4", "P5"}
        assert len(report.violations) >= len(failed)

    def test_json_shape(self):
        data = check_p_property(ctx(G_PARAMS, 19)).to_dict()
        assert set(data["p_property"]) == {"P1", "P2", "P3", "P4", "P5", "unit_params"}
        assert data["E"] == [0, 7] and data["S"] == [0, 7] and data["l"] == 1 and data["d"] == 9

    def test_extended_p4(self):
        for params, p in ((F_PARAMS, 37), (G_PARAMS, 17), (G_PARAMS, 19)):
            assert check_p_property(ctx(params, p), extend_p4=True).verdicts["P4"]

    def test_cyclic_fixed_points(self):
        # p = 1 mod d with unit parameters in (0, 1]: the Dwork map fixes everything
        for params, p in ((F_PARAMS, 37), (G_PARAMS, 19), (T_PARAMS, 7)):
            c = ctx(params, p)
            assert c.dwork_system(1) == c.sys
            assert admissible_set(level_context(c, 1)) == admissible_set(c)

    def test_orbits(self):
        orbits = dwork_orbits(ctx(G_PARAMS, 17))
        assert orbits["alpha_1"]["orbit"] == ["8/9", "1/9"] and orbits["alpha_1"]["period"] == 2
