import pytest
from hypothesis import given
from hypothesis import strategies as st

from rainbowkernel.errors import InvalidConfig, ParseError
from rainbowkernel.exact import exact_answer
from rainbowkernel.graphs import Tournament, enumerate_triangles
from rainbowkernel.instances import (GeneratorConfig, InstanceSpec,
                                     generate_instance, parse_instance,
                                     serialize_instance)

from .strategies import graphs, tournaments


class TestGenerate:
    def test_empty_tournament(self):
        spec = generate_instance(
            GeneratorConfig(problem="TPT", family="uniform", n=0, k=0), seed=7)
        assert spec.payload.n == 0

    def test_planted_tpt_contains_witness(self):
        spec = generate_instance(
            GeneratorConfig(problem="TPT", family="planted", k=2, filler=0), seed=1)
        assert spec.payload.n == 6
        tris = {tuple(sorted(tr)) for tr in enumerate_triangles(spec.payload)}
        assert set(spec.witness) <= tris
        assert exact_answer(spec)  # at least two disjoint triangles

    def test_planted_p3_witness_valid(self):
        spec = generate_instance(
            GeneratorConfig(problem="I2PP", family="planted", k=3, filler=5), seed=4)
        from rainbowkernel.graphs import is_induced_p3
        for tri in spec.witness:
            assert is_induced_p3(spec.payload, tri)
        assert exact_answer(spec)

    def test_determinism(self):
        cfg = GeneratorConfig(problem="FVST", family="planted", k=2, filler=4)
        a = serialize_instance(generate_instance(cfg, seed=11))
        b = serialize_instance(generate_instance(cfg, seed=11))
        assert a == b

    def test_seed_changes_instance(self):
        cfg = GeneratorConfig(problem="TPT", family="uniform", n=10, k=1)
        a = serialize_instance(generate_instance(cfg, seed=1))
        b = serialize_instance(generate_instance(cfg, seed=2))
        assert a != b

    @pytest.mark.parametrize("cfg", [
        GeneratorConfig(problem="TPT", family="gnp", n=5, k=1),
        GeneratorConfig(problem="I2PP", family="uniform", n=5, k=1),
        GeneratorConfig(problem="TPT", family="uniform", n=None, k=1),
        GeneratorConfig(problem="TPT", family="planted", n=5, k=2),
        GeneratorConfig(problem="I2PP", family="gnp", n=5, k=1, edge_prob=1.5),
        GeneratorConfig(problem="TPT", family="nope", n=5, k=1),
    ])
    def test_invalid_configs(self, cfg):
        with pytest.raises(InvalidConfig):
            generate_instance(cfg, seed=0)

    def test_payload_kind_enforced(self):
        t = Tournament.from_arcs(2, [(0, 1)])
        with pytest.raises(InvalidConfig):
            InstanceSpec("I2PP", t, 1)


class TestFormats:
    @given(tournaments(), st.integers(min_value=0, max_value=9),
           st.sampled_from(["TPT", "FVST"]))
    def test_tournament_round_trip(self, t, k, problem):
        spec = InstanceSpec(problem, t, k)
        assert parse_instance(serialize_instance(spec)) == spec

    @given(graphs(), st.integers(min_value=0, max_value=9),
           st.sampled_from(["I2PP", "I2PHS"]))
    def test_graph_round_trip(self, g, k, problem):
        spec = InstanceSpec(problem, g, k)
        assert parse_instance(serialize_instance(spec)) == spec

    def test_trailing_garbage_rejected(self):
        text = serialize_instance(
            InstanceSpec("TPT", Tournament.from_arcs(2, [(0, 1)]), 1))
        with pytest.raises(ParseError) as err:
            parse_instance(text + "extra stuff\n")
        assert err.value.line == 5

    def test_bad_header_line_number(self):
        with pytest.raises(ParseError) as err:
            parse_instance("problem TPT q 3\ntournament 0\n")
        assert err.value.line == 1

    def test_bad_row_line_number(self):
        with pytest.raises(ParseError) as err:
            parse_instance("problem TPT k 1\ntournament 2\n-1\n0\n")
        assert err.value.line == 4

    def test_graph_header_mismatch(self):
        with pytest.raises(ParseError):
            parse_instance("problem I2PP k 1\ngraph 2 2\n0 1\n")
