import json
import math
import os
import subprocess

import jsonschema
import pytest

import planar_qes as q

SCHEMA = os.environ.get(
    "QES_SCHEMA",
    os.path.join(os.path.dirname(__file__), "..", "..", "schema", "result.schema.json"),
)


def test_n1_level():
    (lv,) = q.solve(1, q.Params(0.3, -1))
    assert lv.energy == pytest.approx(-1.25, abs=1e-12)
    assert lv.field_param == pytest.approx(0.3125, abs=1e-12)
    assert lv.terminates()
    assert q.verify(lv).passed


def test_n2_values_and_critical_coupling():
    energies = sorted(lv.energy for lv in q.solve(2, q.Params(0.3, 0)))
    assert energies == pytest.approx([-1.3714594258871589, 3.038126092553823], rel=1e-12)
    assert q.critical_zalpha_n2(0) == pytest.approx(1 / 2.936, rel=1e-3)


def test_errors_carry_their_kind():
    with pytest.raises(q.QesError) as info:
        q.Params(0.6, 0)
    assert "InvalidParams" in str(info.value)
    with pytest.raises(q.QesError):
        q.solve(2, q.Params(0.3406, 0))


def test_semiclassical_and_bethe():
    assert q.ground_state_energy(q.CoulombField(0.25)) == pytest.approx(math.sqrt(3) / 2, abs=1e-14)
    sols = q.solve_bethe(q.BetheProblem(0, 3, q.Coulomb.Attractive))
    assert [round(s.b, 6) for s in sols] == [1.206647, 4.306275]
    assert all(q.factorization_residual(s) < 1e-10 for s in sols)


def test_cli_in_process_output_validates():
    with open(SCHEMA) as fh:
        schema = json.load(fh)
    code, out, _ = q.run_cli(["solve", "--n", "3", "--l", "-1", "--zalpha", "0.3"])
    assert code == 0
    jsonschema.validate(json.loads(out), schema)


@pytest.mark.skipif("QES_BIN" not in os.environ, reason="qes binary path not provided")
def test_cli_binary_matches_in_process():
    args = ["bethe", "--s", "2", "--l", "0", "--sign", "attract"]
    proc = subprocess.run([os.environ["QES_BIN"], *args], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == q.run_cli(args)[1]
