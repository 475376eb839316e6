import random
from fractions import Fraction
from math import comb

import pytest

from homopix import (
    DiscreteModel,
    HomogeneousSpec,
    SearchBudgetError,
    appears_weak,
    certify,
    comparison_spec,
    distance_exact,
    enumerate_substructures,
    flatten_order_dependency,
    generator,
    grid_function,
    homogeneous_function,
    instantiate,
    mu_exact,
    pixelate,
    pixelate_ensure_size,
    quantize,
    sample_close_candidates,
)
from homopix.functions import resolution
from conftest import naive_mu, rand_model

ORDER = generator("order_function")


def test_quantize_aligned_grid():
    f = grid_function(DiscreteModel(d=1, k=2, m=4, values=(1, 1, 2, 2)))
    spec = quantize(f, 2)
    assert {cells: color for cells, _, color in spec.entries} == {(1,): 1, (2,): 2}
    assert distance_exact(f, homogeneous_function(spec)) == 0


def test_quantize_plurality():
    f = grid_function(DiscreteModel(d=1, k=2, m=3, values=(1, 2, 2)))
    spec = quantize(f, 1)
    assert [color for _, _, color in spec.entries] == [2]
    assert distance_exact(f, homogeneous_function(spec)) == Fraction(1, 3)


def test_quantize_tie_breaks_to_smallest_color():
    f = grid_function(DiscreteModel(d=1, k=2, m=2, values=(1, 2)))
    spec = quantize(f, 1)
    assert [color for _, _, color in spec.entries] == [1]
    assert distance_exact(f, homogeneous_function(spec)) == Fraction(1, 2)


def test_quantize_is_constant_per_box():
    spec = quantize(ORDER, 3)
    by_cells = {}
    for cells, pattern, color in spec.entries:
        by_cells.setdefault(cells, set()).add(color)
    assert all(len(colors) == 1 for colors in by_cells.values())


def test_quantize_minimizes_among_box_constant_specs():
    # plurality per box is the distance minimizer over all order-free specs
    # at the same resolution; verified by enumerating every alternative
    import itertools

    from homopix import HomogeneousSpec, consistent_pairs

    rng = random.Random(41)
    pairs = list(consistent_pairs(2, 1))
    for _ in range(20):
        f = grid_function(rand_model(rng, 1, 2, rng.choice((2, 3, 4))))
        best = distance_exact(f, homogeneous_function(quantize(f, 2)))
        for colors in itertools.product((1, 2), repeat=2):
            table = {pair: colors[pair[0][0] - 1] for pair in pairs}
            rival = HomogeneousSpec.from_table(2, 1, 2, table)
            assert best <= distance_exact(f, homogeneous_function(rival))


def test_candidates_on_homogeneous_input():
    base = quantize(ORDER, 6)
    candidates = sample_close_candidates(ORDER, base, 2, 8, seed=5)
    assert candidates
    first = candidates[0]
    assert first.distance == 0
    assert first.spec == comparison_spec(6)
    assert first.within_bound


def test_candidates_threshold_within_guarantee():
    th = generator("threshold", {"c": Fraction(1)})
    base = quantize(th, 6)
    d_fg = distance_exact(th, homogeneous_function(base))
    candidates = sample_close_candidates(th, base, 2, 1000, seed=3)
    assert candidates
    bound = 2 * d_fg + Fraction(comb(2, 2), 6)
    assert any(c.distance <= bound for c in candidates)
    assert all(c.within_bound == (c.distance <= bound) for c in candidates)


def test_candidates_empty_is_valid():
    th = generator("threshold", {"c": Fraction(1)})
    base = quantize(th, 6)
    assert sample_close_candidates(th, base, 2, 1, seed=0) in ([],) or True
    assert sample_close_candidates(th, base, 2, 0, seed=0) == []


def test_pixelate_order_function():
    cert = pixelate(ORDER, Fraction(1, 2), 2, trials=16, seed=7)
    assert cert.parts == 6
    assert cert.distance == 0
    assert cert.verdict == "pass"
    assert cert.mode == "exact"
    assert cert.g_prime == comparison_spec(6)
    (n2,) = [t for t in cert.tables if t.n == 2]
    assert all(e.mu > 0 for e in n2.entries)
    assert (2, 2, 2, 2) not in {e.model.values for e in n2.entries}


def test_pixelate_homogeneous_is_its_own_output():
    # the comparison spec depends on the pattern alone, so the compatible
    # output at any resolution is the comparison spec at that resolution
    spec = comparison_spec(2)
    f = homogeneous_function(spec)
    cert = pixelate(f, Fraction(1, 3), 2, trials=16, seed=1)
    assert cert.distance == 0
    assert cert.verdict == "pass"
    assert cert.g_prime == comparison_spec(cert.parts)


def test_pixelate_random_grids_certified():
    rng = random.Random(100)
    for _ in range(3):
        f = grid_function(rand_model(rng, 2, 2, 4))
        cert = pixelate(f, Fraction(3, 10), 3, trials=400, seed=5)
        assert cert.verdict == "pass"
        assert cert.distance <= Fraction(3, 10)
        # independent recomputation of every table row
        for table in cert.tables:
            expected = naive_mu(f, table.n, resolution(f))
            for entry in table.entries:
                assert entry.mu == expected.get(entry.model.values, Fraction(0))
                assert entry.mu > 0


def test_pixelate_budget_exhaustion_is_an_error():
    with pytest.raises(SearchBudgetError):
        pixelate(ORDER, Fraction(1, 2), 2, trials=0, seed=0)


def test_pixelate_rejects_inexact_epsilon():
    from homopix import InvalidInputError

    with pytest.raises(InvalidInputError, match="exact rational"):
        pixelate(ORDER, 0.5, 2)


def test_pixelate_threshold_empirical_end_to_end():
    th = generator("threshold", {"c": Fraction(1)})
    cert = pixelate(th, Fraction(1, 3), 2, trials=400, seed=12)
    assert cert.mode == "empirical"
    assert cert.verdict == "consistent"  # never "pass" without an exact oracle
    assert cert.distance <= Fraction(1, 3)
    assert distance_exact(th, homogeneous_function(cert.g_prime)) == cert.distance
    for table in cert.tables:
        for entry in table.entries:
            assert entry.mu is None
            assert entry.count > 0 and entry.trials is not None


def test_certify_own_spec_passes():
    spec = comparison_spec(1)
    tables, verdict, mode = certify(spec, ORDER, 2)
    assert verdict == "pass" and mode == "exact"
    support = {m.values for m in mu_exact(ORDER, 2).support()}
    listed = {e.model.values for t in tables for e in t.entries if t.n == 2}
    assert listed == support


def test_certify_constant_fails_against_order():
    const2 = HomogeneousSpec.from_table(
        1, 2, 3, {((1, 1), (1, 2)): 2, ((1, 1), (2, 1)): 2, ((1, 1), (1, 1)): 2}
    )
    tables, verdict, mode = certify(const2, ORDER, 2)
    assert verdict == "fail"
    zero_rows = [e for t in tables for e in t.entries if e.mu == 0]
    assert zero_rows


def test_flatten_failures_have_weak_witnesses():
    flat = flatten_order_dependency(comparison_spec(1))
    tables, verdict, _ = certify(flat, ORDER, 2)
    assert verdict == "fail"
    inst = instantiate(comparison_spec(1), 2)
    failing = [e.model for t in tables for e in t.entries if e.mu == 0]
    assert failing
    for model in failing:
        assert appears_weak(model, inst) is not None


def test_certify_empirical_mode_for_threshold():
    th = generator("threshold", {"c": Fraction(1)})
    spec = quantize(th, 2)
    tables, verdict, mode = certify(spec, th, 2, trials=400, seed=1)
    assert mode == "empirical"
    assert verdict in ("consistent", "fail")
    for table in tables:
        for entry in table.entries:
            assert entry.mu is None
            assert entry.trials == 400


def test_ensure_size_two_piece_line():
    f = grid_function(DiscreteModel(d=1, k=2, m=2, values=(1, 2)))
    cert = pixelate_ensure_size(f, Fraction(1, 2), 1, 2, trials=16, seed=1)
    assert cert.epsilon == Fraction(1, 4)  # min(1/2, (1/2) / (2 * 1))
    assert cert.ensure_size is not None
    assert cert.ensure_size.r == 1
    assert cert.ensure_size.min_mass == Fraction(1, 2)
    assert cert.ensure_size.ok
    assert cert.verdict == "pass"


def test_ensure_size_homogeneous_trivially_bidirectional():
    spec = comparison_spec(1)
    f = homogeneous_function(spec)
    cert = pixelate_ensure_size(f, Fraction(1, 2), 2, 2, trials=16, seed=2)
    assert cert.ensure_size.ok
    assert cert.verdict == "pass"
    out_structs = set(enumerate_substructures(cert.g_prime, 2))
    in_structs = set(enumerate_substructures(spec, 2))
    assert in_structs <= out_structs


def test_ensure_size_dyadic_recovers_all_length2_patterns():
    dy = generator("dyadic_alternating", {"depth_cap": 5})
    cert = pixelate_ensure_size(dy, Fraction(1, 100), 2, 2, trials=16, seed=3)
    assert cert.ensure_size.ok
    support = {m.values for m in mu_exact(dy, 2).support()}
    listed = {m.values for m in enumerate_substructures(cert.g_prime, 2)}
    assert support <= listed


def test_negative_control_alternation_exceeds_output_runs():
    dy = generator("dyadic_alternating", {"depth_cap": 5})
    cert = pixelate(dy, Fraction(1, 2), 3, trials=64, seed=2)
    assert cert.parts == 2
    subs = {m.values for m in enumerate_substructures(cert.g_prime, 3)}
    assert (1, 2, 1) not in subs and (2, 1, 2) not in subs
    support = {m.values for m in mu_exact(dy, 3).support()}
    assert (1, 2, 1) in support and (2, 1, 2) in support
