"""Tests for Starlab's CLI components

Verifies that the CLI components are functioning properly: command loading, the common flags and the exit codes.

:Module: starlab.tests.test_cli_components
"""
# pylint: disable=unused-argument
import json
import math
from typing import Any, Dict, List

import click
import pytest
from click.testing import CliRunner, Result

from starlab.cli.components import StarlabCliLoader, StarlabClickGroup

ALL_COMMANDS = {"beck", "chain", "disc", "gen", "haar", "mc", "riesz", "smallball", "suite"}


def make_group() -> click.Group:
    """This needs to be called inside the test so that the experiment and CLI loading happens after the mocking."""

    @click.group(cls=StarlabClickGroup)
    def cli_group_testing() -> None:
        """A CLI group for testing"""

    return cli_group_testing


def run(args: List[str]) -> Result:
    """Invokes a fresh group; stdout and stderr are kept apart (the logo goes to stderr)."""
    return CliRunner(mix_stderr=False).invoke(make_group(), args)


def document(result: Result) -> Dict[str, Any]:
    """The --json document of a run."""
    return json.loads(result.stdout)


def test_cli_startup(test_cli_loader: StarlabCliLoader) -> None:
    """This tests the CLI startup entrypoint, which also tests most of the CLI loader at the same time."""
    group = make_group()
    result = CliRunner(mix_stderr=False).invoke(group)
    assert result.exit_code == 0
    assert set(group.commands) == ALL_COMMANDS


def test_disabled_commands_are_not_registered(test_configuration: Dict[str, Any], test_cli_loader: StarlabCliLoader) -> None:
    """An experiment disabled in the configuration has no command."""
    test_configuration["GenExperiment"]["Enabled"] = False
    test_configuration.pop("BeckExperiment")
    assert set(make_group().commands) == ALL_COMMANDS - {"gen", "beck"}


def test_main_cli() -> None:
    """This tests that the main CLI can load successfully."""
    from starlab.cli.entrypoint import cli

    result = CliRunner(mix_stderr=False).invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "Starlab is a lab for discrepancy theory and the Small Ball inequality." in result.stdout


def test_gen(test_cli_loader: StarlabCliLoader) -> None:
    """The plain output is a point file."""
    result = run(["gen", "--set", "vdc", "--k", "2"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert len(lines) == 4
    assert all(len(line.split()) == 2 for line in lines)

    wrapped = run(["gen", "--set", "random", "--N", "3", "--d", "3", "--seed", "1", "--json"])
    assert wrapped.exit_code == 0
    assert document(wrapped)["records"][0]["dimension"] == 3
    assert len(document(wrapped)["text"].splitlines()) == 3


def test_gen_reads_back(test_cli_loader: StarlabCliLoader, tmp_path) -> None:
    """A generated file reads back through --set file, given as --points or its alias --file."""
    path = tmp_path / "vdc.txt"
    assert run(["gen", "--set", "vdc", "--k", "3", "--out", str(path)]).exit_code == 0

    result = run(["gen", "--set", "file", "--points", str(path)])
    assert result.exit_code == 0
    assert result.stdout == path.read_text(encoding="utf-8")

    result = run(["disc", "--set", "file", "--points", str(path), "--norm", "sup", "--json"])
    assert result.exit_code == 0
    assert document(result)["records"][0]["n_points"] == 8

    assert run(["gen", "--set", "file", "--file", str(path)]).stdout == path.read_text(encoding="utf-8")


def test_smallball(test_cli_loader: StarlabCliLoader) -> None:
    """An exhaustive search in the plane is proved at n + 1."""
    result = run(["smallball", "--d", "2", "--n", "1..2", "--method", "exhaustive", "--json"])
    assert result.exit_code == 0
    records = document(result)["records"]
    assert [record["value"] for record in records] == [2, 3]
    assert all(record["proved"] and record["holds"] and record["monotone"] for record in records)
    assert document(result)["passed"] is True


def test_smallball_uses_configuration_defaults(test_cli_loader: StarlabCliLoader) -> None:
    """The Defaults of the experiment's section fill in the payload; flags override them."""
    result = run(["smallball", "--n", "2", "--method", "local_search", "--seed", "3", "--json"])
    assert result.exit_code == 0
    assert document(result)["records"][0]["restarts"] == 4

    result = run(["smallball", "--n", "2", "--method", "local_search", "--seed", "3", "--restarts", "2", "--json"])
    assert document(result)["records"][0]["restarts"] == 2


def test_disc(test_cli_loader: StarlabCliLoader) -> None:
    """The exact L2 norm of a van der Corput set."""
    result = run(["disc", "--set", "vdc", "--k", "6", "--norm", "l2", "--json"])
    assert result.exit_code == 0
    record = document(result)["records"][0]
    assert record["method"] == "closed_form"
    assert record["exact"] is True
    assert record["n_points"] == 64
    assert record["value"] > 0


def test_config_file_merging(test_cli_loader: StarlabCliLoader, tmp_path) -> None:
    """Flags win over the config file, and the merged parameters are in the provenance."""
    path = tmp_path / "disc.json"
    path.write_text(json.dumps({"Set": "vdc", "K": 3, "Norm": "sup"}), encoding="utf-8")

    result = run(["disc", "--config", str(path), "--k", "2", "--json"])
    assert result.exit_code == 0
    output = document(result)
    assert output["records"][0]["label"] == "vdc(k=2)"
    assert output["records"][0]["norm"] == "sup"
    assert output["provenance"]["config"] == {"Set": "vdc", "K": 2, "Norm": "sup"}


def test_out_and_csv(test_cli_loader: StarlabCliLoader, tmp_path) -> None:
    """--out writes the file instead of stdout; --format csv writes the experiment's columns."""
    path = tmp_path / "disc.csv"
    result = run(["disc", "--set", "vdc", "--k", "4", "--format", "csv", "--out", str(path)])
    assert result.exit_code == 0
    assert result.stdout == ""

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# ")
    assert lines[1].startswith("label,n_points,dimension,norm,method,value")
    assert lines[2].startswith("vdc(k=4),16,2,l2,closed_form,")


@pytest.mark.parametrize(
    "args",
    [
        ["disc", "--set", "random", "--N", "5"],
        ["disc", "--set", "vdc"],
        ["disc", "--set", "vdc", "--k", "3", "--norm", "lp:0.5"],
        ["smallball", "--d", "2"],
        ["smallball", "--d", "2", "--n", "8", "--method", "exhaustive"],
        ["mc", "--n", "3"],
        ["suite", "--only", "no_such_check"],
        ["suite", "--tol", "riesz"],
        ["beck", "--d", "2", "--n", "2"],
        ["gen", "--set", "file", "--file", "does/not/exist.txt"],
        ["warp"],
    ],
)
def test_usage_errors_exit_1(test_cli_loader: StarlabCliLoader, args: List[str]) -> None:
    """Validation, usage and budget errors exit with 1."""
    result = run(args)
    assert result.exit_code == 1


def test_failed_criterion_exits_2(test_cli_loader: StarlabCliLoader) -> None:
    """A check that misses its tolerance fails the suite with 2."""
    result = run(["suite", "--quick", "--only", "l2_exact", "--tol", "l2_exact=0", "--json"])
    assert result.exit_code == 2
    output = document(result)
    assert output["passed"] is False
    assert output["records"][0]["check"] == "l2_exact"
    assert output["records"][0]["tolerance"] == 0

    result = run(["suite", "--quick", "--only", "l2_exact", "--only", "counting", "--json"])
    assert result.exit_code == 0
    assert [record["check"] for record in document(result)["records"]] == ["counting", "l2_exact"]


def test_riesz(test_cli_loader: StarlabCliLoader) -> None:
    """The Talagrand certificates hold for all-plus signs, and the support has the predicted measure."""
    result = run(["riesz", "--variant", "talagrand", "--n", "1..3", "--json"])
    assert result.exit_code == 0
    records = document(result)["records"]
    assert len(records) == 3
    assert all(record["holds"] and record["duality"] for record in records)

    result = run(["riesz", "--variant", "support", "--n", "2", "--json"])
    assert result.exit_code == 0
    record = document(result)["records"][0]
    assert record["measure"] == pytest.approx(record["expected"])
    assert record["vdc_points"] == 8

    assert run(["riesz", "--variant", "talagrand", "--n", "2", "--signs", "random"]).exit_code == 1


def test_chain(test_cli_loader: StarlabCliLoader) -> None:
    """The L2 chain holds, and a sweep adds the trend fit."""
    result = run(["chain", "--set", "vdc", "--k", "4", "--json"])
    assert result.exit_code == 0
    assert document(result)["records"][0]["holds"] is True

    result = run(["chain", "--sweep", "2..4", "--json"])
    assert result.exit_code == 0
    records = document(result)["records"]
    assert len(records) == 4
    assert records[-1]["label"] == "trend"


def test_haar(test_cli_loader: StarlabCliLoader) -> None:
    """One row per shape of the natural order, or one per rectangle."""
    result = run(["haar", "--set", "vdc", "--k", "3", "--json"])
    assert result.exit_code == 0
    records = document(result)["records"]
    assert len(records) == 5
    assert {record["order"] for record in records} == {4}

    result = run(["haar", "--set", "vdc", "--k", "3", "--shape", "1,2", "--rectangles", "--json"])
    assert result.exit_code == 0
    assert len(document(result)["records"]) == 8


def test_mc(test_cli_loader: StarlabCliLoader) -> None:
    """Planar sign sums have sup norm n + 1; three scales add the fit."""
    result = run(["mc", "--n", "2", "--trials", "5", "--seed", "1", "--json"])
    assert result.exit_code == 0
    assert document(result)["records"][0]["value"] == 3

    result = run(["mc", "--n", "1..3", "--seed", "1", "--json"])
    assert result.exit_code == 0
    records = document(result)["records"]
    assert records[0]["trials"] == 50
    assert records[-1]["conjectured"] == 1
    assert records[-1]["intercept"] == pytest.approx(math.log(records[-1]["constant"]))

    result = run(["mc", "--n", "3", "--density", "0.5", "--trials", "3", "--seed", "2", "--json"])
    assert result.exit_code == 0
    assert document(result)["records"][0]["holds"] is True


def test_beck(test_cli_loader: StarlabCliLoader) -> None:
    """One row per scale and ladder exponent; patterns add a fit row."""
    result = run(["beck", "--n", "1..2", "--json"])
    assert result.exit_code == 0
    records = document(result)["records"]
    assert len(records) == 6
    assert {record["p"] for record in records} == {2.0, 4.0, 8.0}

    result = run(["beck", "--mode", "pattern", "--n", "1..3", "--pattern", "0-1:0", "--json"])
    assert result.exit_code == 0
    assert "predicted_exponent" in document(result)["records"][-1]


@pytest.mark.parametrize(
    "args",
    [
        ["mc", "--d", "3", "--n", "1..3", "--trials", "20", "--seed", "7", "--json"],
        ["disc", "--set", "random", "--N", "16", "--seed", "3", "--norm", "l2", "--sampled", "--resolution", "6", "--json"],
    ],
)
def test_seeded_runs_are_byte_identical(test_cli_loader: StarlabCliLoader, args: List[str]) -> None:
    """The same parameters and seed give the same output, whatever the number of threads."""
    outputs = []
    for threads in ("1", "4", "1", "4"):
        result = run(args + ["--threads", threads])
        assert result.exit_code == 0
        outputs.append(result.stdout)

    assert len(set(outputs)) == 1
    assert run(args).stdout == outputs[0]


def test_suite_reports_the_littlewood_paley_constant(test_cli_loader: StarlabCliLoader) -> None:
    """The fitted square-function constant is a row of the suite."""
    result = run(["suite", "--quick", "--only", "littlewood_paley", "--json"])
    assert result.exit_code == 0
    record = document(result)["records"][0]
    assert record["check"] == "littlewood_paley"
    assert 0 < record["measured"] < record["tolerance"]
