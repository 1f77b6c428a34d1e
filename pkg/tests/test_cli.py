import json

from eqdeg.cli import EXIT_CERTIFICATION, EXIT_INPUT, EXIT_OK, EXIT_ZERO_DEGREE, main


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def quadratic_problem(lam=0.5, radius=1.0):
    return {
        "kind": "hamiltonian",
        "group": "S1",
        "dof": 1,
        "terms": [{"exps": [2, 0], "coeff": 0.5}, {"exps": [0, 2], "coeff": 0.5}],
        "lambda": lam,
        "radius": radius,
        "truncation": "auto",
    }


def normalization_problem():
    # the map A + P0 written as an abstract problem: the potential
    # -|x0|^2/2 on the kernel coordinates gives F = -P0 x
    return {
        "kind": "abstract",
        "group": "S1",
        "spectrum": [
            {"eigenvalue": 0.0, "rep": {"trivial": 2, "modes": []}},
            {"eigenvalue": -1.0, "rep": {"trivial": 0, "modes": [[1, 1]]}},
            {"eigenvalue": 1.0, "rep": {"trivial": 0, "modes": [[1, 1]]}},
            {"eigenvalue": -2.0, "rep": {"trivial": 0, "modes": [[2, 1]]}},
            {"eigenvalue": 2.0, "rep": {"trivial": 0, "modes": [[2, 1]]}},
            {"eigenvalue": -3.0, "rep": {"trivial": 1, "modes": []}},
            {"eigenvalue": 3.0, "rep": {"trivial": 1, "modes": []}},
            {"eigenvalue": -4.0, "rep": {"trivial": 1, "modes": []}},
            {"eigenvalue": 4.0, "rep": {"trivial": 1, "modes": []}},
            {"eigenvalue": -5.0, "rep": {"trivial": 1, "modes": []}},
            {"eigenvalue": 5.0, "rep": {"trivial": 1, "modes": []}},
            {"eigenvalue": -6.0, "rep": {"trivial": 1, "modes": []}},
            {"eigenvalue": 6.0, "rep": {"trivial": 1, "modes": []}},
        ],
        "nonlinearity": {
            "variables": 2,
            "terms": [{"exps": [2, 0], "coeff": -0.5}, {"exps": [0, 2], "coeff": -0.5}],
        },
        "radius": 1.0,
        "truncation": "auto",
    }


def test_compute_normalization_problem(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["compute", write(tmp_path, "p.json", normalization_problem()), "--json", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["degree"]["value"] == [{"coeff": 1, "subgroup": "S1"}]
    assert report["checks"]["stabilization"] == "pass"


def test_compute_quadratic_hamiltonian(tmp_path):
    out = tmp_path / "report.json"
    code = main(["compute", write(tmp_path, "p.json", quadratic_problem()), "--json", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["degree"]["value"] == [{"coeff": 1, "subgroup": "S1"}]
    assert report["verdict"].startswith("periodic solution certified")


def test_compute_zero_degree_exit_code(tmp_path):
    problem = {
        "kind": "hamiltonian",
        "group": "S1",
        "dof": 1,
        "terms": [
            {"exps": [2, 0], "coeff": 0.5},
            {"exps": [0, 2], "coeff": 0.5},
            {"exps": [1, 0], "coeff": 0.8},
        ],
        "lambda": 0.5,
        "radius": 0.3,
    }
    assert main(["compute", write(tmp_path, "p.json", problem)]) == EXIT_ZERO_DEGREE


def test_compute_certification_failure_exit_code(tmp_path):
    code = main(["compute", write(tmp_path, "p.json", quadratic_problem(lam=1.0))])
    assert code == EXIT_CERTIFICATION


def test_malformed_spectrum_is_input_error(tmp_path):
    problem = normalization_problem()
    problem["spectrum"][1]["shell"] = 3  # eigenvalue -1.0 belongs to shell 1
    assert main(["compute", write(tmp_path, "p.json", problem)]) == EXIT_INPUT


def test_invalid_json_is_input_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["compute", str(path)]) == EXIT_INPUT


def test_missing_field_is_input_error(tmp_path):
    assert main(["compute", write(tmp_path, "p.json", {"kind": "hamiltonian"})]) == EXIT_INPUT


def test_cyclic_group_rejected_for_compute(tmp_path):
    problem = quadratic_problem()
    problem["group"] = {"cyclic": 4}
    assert main(["compute", write(tmp_path, "p.json", problem)]) == EXIT_INPUT


def test_report_is_byte_stable_across_runs(tmp_path):
    src = write(tmp_path, "p.json", quadratic_problem())
    outs = []
    for i in range(2):
        out = tmp_path / f"report{i}.json"
        assert main(["compute", src, "--json", str(out), "--seed", "7"]) == EXIT_OK
        data = json.loads(out.read_text())
        data.pop("timing_seconds")
        outs.append(json.dumps(data, sort_keys=True))
    assert outs[0] == outs[1]


def test_truncation_override(tmp_path):
    src = write(tmp_path, "p.json", quadratic_problem())
    out = tmp_path / "report.json"
    assert main(["compute", src, "--truncation", "3", "--json", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["degree"]["level"] == 3
    assert main(["compute", src, "--truncation", "nope"]) == EXIT_INPUT


def test_selftest_all_suites(capsys):
    assert main(["selftest", "--seed", "0"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert all(line.startswith("[PASS]") for line in lines)


def test_selftest_single_suite(capsys):
    assert main(["selftest", "--suite", "ring"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1 and "ring" in lines[0]


def test_selftest_unknown_suite():
    assert main(["selftest", "--suite", "bogus"]) == EXIT_INPUT


def test_selftest_deterministic_output(capsys):
    main(["selftest", "--suite", "oracle", "--seed", "3"])
    first = capsys.readouterr().out
    main(["selftest", "--suite", "oracle", "--seed", "3"])
    second = capsys.readouterr().out
    assert first == second
