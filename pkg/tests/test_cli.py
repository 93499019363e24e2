"""Command-line behavior: reports, determinism, exit codes, file outputs."""

import json
import shutil
from pathlib import Path

import pytest

from ncgames import parse_game, parse_witness, serialize_game
from ncgames.cli import cli_dispatch

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def workdir(tmp_path):
    for name in ("classroom.game", "absentminded.game"):
        shutil.copy(FIXTURES / name, tmp_path / name)
    return tmp_path


def run(capsys, *argv):
    code = cli_dispatch([str(x) for x in argv])
    return code, capsys.readouterr().out


class TestValidate:
    def test_ok_summary(self, workdir, capsys):
        code, out = run(capsys, "validate", workdir / "classroom.game")
        assert code == 0
        assert out == "ok: 3 players, 9 nodes, 6 choices, 5 plays, 8 grand strategies\n"

    def test_invalid_document_exits_1(self, workdir, capsys):
        doc = json.loads((workdir / "classroom.game").read_text())
        doc["ownership"]["P3"] = ["e"]
        bad = workdir / "bad.game"
        bad.write_text(json.dumps(doc))
        code, out = run(capsys, "validate", bad)
        assert code == 1
        assert out.startswith("error: AxiomViolation")
        assert "UnassignedChoice" in out

    def test_missing_file_exits_1(self, workdir, capsys):
        code, out = run(capsys, "validate", workdir / "nope.game")
        assert code == 1
        assert out.startswith("error:")

    def test_usage_error_exits_2(self, workdir):
        with pytest.raises(SystemExit) as err:
            cli_dispatch(["frobnicate"])
        assert err.value.code == 2


class TestNash:
    def test_classroom_equilibria(self, workdir, capsys):
        code, out = run(capsys, "nash", workdir / "classroom.game")
        assert code == 0
        assert out == "{b,d,f}\n{b,g,f}\n"

    def test_byte_stable_across_runs(self, workdir, capsys):
        outputs = {
            run(capsys, "nash", workdir / "classroom.game")[1] for _ in range(3)
        }
        assert len(outputs) == 1


class TestDerive:
    def test_report_contents(self, workdir, capsys):
        code, out = run(capsys, "derive", workdir / "classroom.game")
        assert code == 0
        assert "root: 0" in out
        assert "{3,4}: P3 {e,f}" in out
        assert "{a,d,e} -> {0,1,4,7}" in out
        assert "P3: {e} {f}" in out

    def test_byte_stable_across_runs(self, workdir, capsys):
        outputs = {
            run(capsys, "derive", workdir / "classroom.game")[1] for _ in range(3)
        }
        assert len(outputs) == 1

    def test_byte_stable_across_hash_seeds(self, workdir):
        import subprocess
        import sys

        outputs = set()
        for seed in ("0", "424242"):
            result = subprocess.run(
                [sys.executable, "-m", "ncgames.cli", "derive", "classroom.game"],
                cwd=workdir,
                env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"},
                capture_output=True,
                text=True,
            )
            assert result.returncode == 0
            outputs.add(result.stdout)
        assert len(outputs) == 1


class TestConvert:
    def test_csq_writes_game_and_witness(self, workdir, capsys):
        out_game = workdir / "out.game"
        out_witness = workdir / "out.witness"
        code, out = run(
            capsys,
            "convert",
            "--to",
            "csq",
            workdir / "classroom.game",
            "-o",
            out_game,
            "-w",
            out_witness,
        )
        assert code == 0
        assert "style: choice-sequence" in out
        converted = parse_game(out_game.read_text())
        assert serialize_game(converted) == out_game.read_text()
        witness = parse_witness(out_witness.read_text())
        assert witness.morphism.target == converted

    def test_canonical_reports_style(self, workdir, capsys):
        code, out = run(
            capsys,
            "convert",
            "--to",
            "canonical",
            workdir / "classroom.game",
            "-o",
            workdir / "c.game",
            "-w",
            workdir / "c.witness",
        )
        assert code == 0
        assert "style: choice-set" in out

    def test_cset_on_absentminded_fails(self, workdir, capsys):
        code, out = run(
            capsys,
            "convert",
            "--to",
            "cset",
            workdir / "absentminded.game",
        )
        assert code == 1
        assert "Absentminded" in out

    def test_absentminded_to_csq_succeeds(self, workdir, capsys):
        code, out = run(
            capsys,
            "convert",
            "--to",
            "canonical",
            workdir / "absentminded.game",
            "-o",
            workdir / "ab.game",
            "-w",
            workdir / "ab.witness",
        )
        assert code == 0
        assert "style: choice-sequence" in out


class TestIso:
    def test_self_isomorphism(self, workdir, capsys):
        witness_path = workdir / "self.witness"
        code, out = run(
            capsys,
            "iso",
            workdir / "classroom.game",
            workdir / "classroom.game",
            "-w",
            witness_path,
        )
        assert code == 0
        assert out.startswith("isomorphic")
        parse_witness(witness_path.read_text())

    def test_non_isomorphic_games(self, workdir, capsys):
        code, out = run(
            capsys,
            "iso",
            workdir / "classroom.game",
            workdir / "absentminded.game",
        )
        assert code == 1
        assert out == "not isomorphic\n"

    def test_iso_check_witness(self, workdir, capsys):
        witness_path = workdir / "self.witness"
        run(
            capsys,
            "iso",
            workdir / "classroom.game",
            workdir / "classroom.game",
            "-w",
            witness_path,
        )
        code, out = run(capsys, "iso-check", witness_path)
        assert code == 0
        assert out == "valid isomorphism witness\n"

    def test_iso_check_rejects_tampered_witness(self, workdir, capsys):
        witness_path = workdir / "self.witness"
        run(
            capsys,
            "iso",
            workdir / "classroom.game",
            workdir / "classroom.game",
            "-w",
            witness_path,
        )
        doc = json.loads(witness_path.read_text())
        doc["morphism"]["beta"]["P1"] = [["-1", "0"], ["0", "0"], ["1", "1"]]
        witness_path.write_text(json.dumps(doc))
        code, out = run(capsys, "iso-check", witness_path)
        assert code == 1
        assert out.startswith("error:")


class TestSubgame:
    def test_cut_information_set_fails(self, workdir, capsys):
        code, out = run(
            capsys, "subgame", workdir / "classroom.game", "--at", "3"
        )
        assert code == 1
        assert "InformationSetCut" in out

    def test_root_subgame_written(self, workdir, capsys):
        out_path = workdir / "root.game"
        code, out = run(
            capsys,
            "subgame",
            workdir / "classroom.game",
            "--at",
            "0",
            "-o",
            out_path,
        )
        assert code == 0
        sub = parse_game(out_path.read_text())
        assert sub == parse_game((workdir / "classroom.game").read_text())


class TestCompose:
    def test_compose_identity_with_itself(self, workdir, capsys):
        from ncgames import identity_morphism, load_game, serialize_morphism

        game = load_game(workdir / "classroom.game")
        m = identity_morphism(game)
        m_path = workdir / "id.morphism"
        m_path.write_text(serialize_morphism(m))
        out_path = workdir / "composed.morphism"
        code, out = run(capsys, "compose", m_path, m_path, "-o", out_path)
        assert code == 0
        from ncgames import parse_morphism

        assert parse_morphism(out_path.read_text()) == m

    def test_mismatched_morphisms_fail(self, workdir, capsys):
        from ncgames import identity_morphism, load_game, serialize_morphism
        from ncgames.transforms import apply_utility_transform

        game = load_game(workdir / "classroom.game")
        doubled, witness = apply_utility_transform(
            game, {i: {u: 2 * u for u in game.ranges[i]} for i in game.players}
        )
        d_path = workdir / "double.morphism"
        d_path.write_text(serialize_morphism(witness.morphism))
        code, out = run(capsys, "compose", d_path, d_path)
        assert code == 1
        assert "TargetSourceMismatch" in out
