"""The workspace grammar, its JSON views, and the command line."""

import json
import pathlib
import subprocess
import sys

import pytest

from polyshape import (
    PLANAR,
    SYMMETRIC,
    ShapelyFunctor,
    corolla,
    free_monad,
    sigma_polycat,
)
from polyshape.cli import main
from polyshape.workspace import (
    ParseError,
    functor_to_dict,
    morphism_to_dict,
    parse,
    parse_file,
    polygraph_to_dict,
    serialize,
    shape_to_dict,
)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fixture(name):
    return str(FIXTURES / name)


# ---------------------------------------------------------------------------
# Parsing


def test_parse_loop_fixture():
    w = parse_file(fixture("loop.pg"))
    assert set(w.polygraphs) == {"A", "C"}
    assert set(w.shapes) == {"link"}
    assert set(w.functors) == {"F"}
    f = w.functors["F"]
    assert f.mode == PLANAR and f.bounds == (3, 2)
    assert f.shape_count == 1


def test_round_trip_all_fixtures():
    for name in ("loop.pg", "beads.pg", "minext.pg", "mixed.pg"):
        w = parse_file(fixture(name))
        text = serialize(w)
        again = parse(text)
        assert serialize(again) == text
        assert set(again.polygraphs) == set(w.polygraphs)
        assert again.polygraphs == w.polygraphs
        assert again.shapes == w.shapes
        for fname in w.functors:
            assert again.functors[fname] == w.functors[fname]


def test_parse_reports_unknown_vertex_with_line():
    # Validation happens when the block closes, so the location points at
    # the polygraph header rather than the offending edge line.
    text = "polygraph P\nvertex a\nedge e : (a) -> (b)\n"
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert "line 1" in str(exc.value)
    assert "unknown target 'b'" in str(exc.value)


def test_parse_reports_duplicate_names():
    text = "polygraph P\nvertex a\n\npolygraph P\nvertex b\n"
    with pytest.raises(ParseError, match="duplicate name 'P'"):
        parse(text)
    shared = ("polygraph P\nvertex a\n\n"
              "shape P of P : leaves () roots ()\n")
    with pytest.raises(ParseError, match="duplicate name"):
        parse(shared)


def test_parse_reports_stray_directives():
    with pytest.raises(ParseError, match="line 1"):
        parse("vertex a\n")
    with pytest.raises(ParseError, match="unknown directive"):
        parse("polygraph P\nvertex a\nfrobnicate b\n")


def test_parse_rejects_ill_labelled_functor_shape():
    text = ("polygraph L\nvertex v\nedge e : (v) -> (v)\n\n"
            "shape bad of L : leaves () roots ()\n"
            "functor F mode planar bounds 2 2 : bad\n")
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert "line 6" in str(exc.value)
    assert "not well-labelled" in str(exc.value)


def test_parse_rejects_unknown_shape_in_functor():
    with pytest.raises(ParseError, match="unknown shape"):
        parse("functor F mode planar bounds 2 2 : ghost\n")


def test_serialize_orders_by_name():
    text = ("polygraph B\nvertex b\n\npolygraph A\nvertex a\n")
    out = serialize(parse(text))
    assert out.index("polygraph A") < out.index("polygraph B")


# ---------------------------------------------------------------------------
# JSON views


def test_polygraph_and_shape_views():
    w = parse_file(fixture("loop.pg"))
    doc = polygraph_to_dict(w.polygraphs["A"])
    assert doc == {"vertices": ["v"],
                   "edges": [{"name": "e", "sources": ["v"],
                              "targets": ["v"]}]}
    sdoc = shape_to_dict(w.shapes["link"])
    assert set(sdoc) == {"vertices", "edges", "leaves", "roots"}
    assert sdoc["leaves"] == ["a"] and sdoc["roots"] == ["b"]


def test_morphism_view_lists_port_perms():
    from polyshape import are_isomorphic, relabel

    x = corolla(2, 0)
    f = are_isomorphic(x, relabel(x, (1, 0), ()), SYMMETRIC)
    doc = morphism_to_dict(f)
    assert doc["mode"] == SYMMETRIC
    (entry,) = doc["edges"].values()
    assert entry["in_perm"] == [1, 0]
    assert doc["vertices"] == {"v0": "v1", "v1": "v0"}


def test_functor_view_keys_stages_by_arity():
    f = sigma_polycat((2, 2))
    doc = functor_to_dict(f, include_shapes=False)
    assert doc["mode"] == PLANAR and doc["bounds"] == [2, 2]
    assert "1,1" in doc["stages"]
    assert doc["shape_count"] == sum(
        len(stage) for stage in doc["stages"].values())


# ---------------------------------------------------------------------------
# Command line


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_json(out):
    return json.loads(out)


def test_enumerate_defaults(capsys):
    code, out, err = run_cli(
        ["enumerate", "--class", "tree", "--arity", "1", "1"], capsys)
    assert code == 0 and err == ""
    doc = parse_json(out)
    assert doc["count"] == 11 and len(doc["digests"]) == 11
    assert out.endswith("\n")
    assert json.dumps(doc, indent=2, sort_keys=True) + "\n" == out


def test_free_monad_digests_only(capsys):
    code, out, _ = run_cli(
        ["free-monad", "--kind", "polycat", "--max-edges", "2",
         "--digests-only"], capsys)
    assert code == 0
    doc = parse_json(out)
    assert doc["shape_count"] == 117
    assert free_monad(sigma_polycat((2, 2))).shape_count == 117


def test_apply_reproduces_interchangeable_beads(capsys):
    code, out, _ = run_cli(
        ["apply", "--kind", "prop", "--input", fixture("beads.pg"),
         "--max-edges", "2", "--max-arity", "2"], capsys)
    assert code == 0
    doc = parse_json(out)
    assert doc["star"] == ["w"]
    closed = doc["stages"]["0,0"]
    assert [c["orbit_size"] for c in closed].count(2) == 1


def test_free_structure_loop_endomorphisms(capsys):
    code, out, _ = run_cli(
        ["free-structure", "--kind", "polycat", "--input",
         fixture("loop.pg"), "--polygraph", "A"], capsys)
    assert code == 0
    doc = parse_json(out)
    (vv,) = [h for h in doc["homs"]
             if h["sources"] == ["v"] and h["targets"] == ["v"]]
    assert len(vv["morphisms"]) == 4


def test_check_axioms_round_trip(capsys):
    code, out, _ = run_cli(
        ["check-axioms", "--kind", "properad", "--input",
         fixture("loop.pg"), "--polygraph", "A", "--trials", "40",
         "--seed", "7"], capsys)
    assert code == 0
    doc = parse_json(out)
    assert doc["ok"] is True and doc["trials"] == 40


def test_check_axioms_mutate_reports_but_exits_zero(capsys):
    code, out, _ = run_cli(
        ["check-axioms", "--kind", "prop", "--input", fixture("mixed.pg"),
         "--polygraph", "P", "--trials", "60", "--seed", "3",
         "--mode", "symmetric", "--mutate"], capsys)
    assert code == 0
    doc = parse_json(out)
    assert doc["ok"] is False and doc["mutate"] is True


def test_canon_defaults_to_sole_shape(capsys):
    code, out, _ = run_cli(["canon", "--input", fixture("loop.pg")], capsys)
    assert code == 0
    doc = parse_json(out)
    assert set(doc) >= {"digest", "canonical", "group_order", "witness"}


def test_minext_obstruction_and_extension(capsys):
    base = ["minext", "--input", fixture("minext.pg"),
            "--domain", "pair", "--codomain", "cap",
            "--map", "a=s0", "--map", "b=s1"]
    code, out, _ = run_cli(base + ["--sigma", "a=b", "--sigma", "b=a"],
                           capsys)
    assert code == 0
    doc = parse_json(out)
    assert "no_extension" in doc
    assert doc["no_extension"]["edge"] == "c"
    code, out, _ = run_cli(base + ["--sigma", "a=a", "--sigma", "b=b"],
                           capsys)
    assert code == 0
    assert "extension" in parse_json(out)


def test_spectrum_universal(capsys):
    code, out, _ = run_cli(["spectrum", "--universal"], capsys)
    assert code == 0
    doc = parse_json(out)
    assert doc["mode"] == PLANAR and doc["bounds"] == [2, 2]
    assert sum(len(v) for v in doc["stages"].values()) == 711
    entry = doc["stages"]["1,1"][0]
    assert entry["group_order"] == len(entry["group"])


def test_domain_errors_exit_one(capsys):
    cases = [
        (["canon", "--input", "/nonexistent/x.pg"], "no-such-file"),
        (["canon", "--input", fixture("beads.pg"), "--shape", "ghost"],
         "no-such-name"),
        (["canon", "--input", fixture("mixed.pg")], "ambiguous-name"),
        (["free-structure", "--kind", "polycat", "--input",
          fixture("loop.pg")], "ambiguous-name"),
        (["minext", "--input", fixture("minext.pg"), "--domain", "cap",
          "--codomain", "cap", "--map", "s0=s0", "--map", "s1=s1"],
         "not-discrete"),
        (["minext", "--input", fixture("minext.pg"), "--domain", "pair",
          "--codomain", "cap", "--map", "a=s0", "--map", "b=s0",
          "--sigma", "a=a", "--sigma", "b=b"], "bad-extension-problem"),
        (["minext", "--input", fixture("minext.pg"), "--domain", "pair",
          "--codomain", "cap", "--map", "a=s0"], "bad-map"),
    ]
    for argv, code_word in cases:
        code, out, err = run_cli(argv, capsys)
        assert code == 1, argv
        assert out == ""
        doc = json.loads(err)
        assert doc["code"] == code_word, argv


def test_parse_error_surfaces_with_location(tmp_path, capsys):
    bad = tmp_path / "bad.pg"
    bad.write_text("polygraph P\nvertex a\nedge e : (a) -> (zz)\n")
    code, _, err = run_cli(["canon", "--input", str(bad)], capsys)
    assert code == 1
    doc = json.loads(err)
    assert doc["code"] == "parse-error"
    assert "line 1" in doc["message"]
    assert "unknown target 'zz'" in doc["message"]


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--class", "tree"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_bad_thread_env_exits_two(capsys, monkeypatch):
    monkeypatch.setenv("SHAPELY_THREADS", "zero")
    code, out, err = run_cli(["spectrum", "--universal"], capsys)
    assert code == 2
    assert json.loads(err)["code"] == "bad-threads"
    monkeypatch.setenv("SHAPELY_THREADS", "1")
    code, _, _ = run_cli(["enumerate", "--class", "tree", "--arity", "0",
                          "0"], capsys)
    assert code == 0


def test_cli_output_is_byte_deterministic():
    argv = [sys.executable, "-m", "polyshape.cli", "free-structure",
            "--kind", "properad", "--input", fixture("loop.pg"),
            "--polygraph", "A", "--max-edges", "2"]
    first = subprocess.run(argv, capture_output=True, cwd="/")
    second = subprocess.run(argv, capture_output=True, cwd="/")
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout.decode().startswith("{")
