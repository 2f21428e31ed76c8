#!/usr/bin/env python3
"""End-to-end checks of the equiorbit command-line tool.

usage: cli_test.py PATH_TO_EXECUTABLE SOURCE_DIR
"""
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

EXE = None
ROOT = None


def run(*args, stdin=None):
    return subprocess.run([EXE, *args], input=stdin, capture_output=True, text=True, timeout=600)


def group_file(name):
    return os.path.join(ROOT, "data", "groups", name)


def schema(name):
    with open(os.path.join(ROOT, "schemas", name)) as f:
        return json.load(f)


class Cli(unittest.TestCase):
    def ok_json(self, args, schema_name, stdin=None):
        r = run(*args, stdin=stdin)
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads(r.stdout)
        jsonschema.validate(doc, schema(schema_name))
        return doc

    def assert_error(self, r, name=None):
        self.assertEqual(r.returncode, 1)
        err = json.loads(r.stderr.strip().splitlines()[-1])
        jsonschema.validate(err, schema("error.schema.json"))
        if name:
            self.assertEqual(err["error"], name)

    def test_catalog_icosahedral_row(self):
        rows = self.ok_json(["catalog", "--family", "Y"], "catalog.schema.json")
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]["order"], 60)
        self.assertEqual(rows[0]["generators"], ["pi_3", "pi_3'"])
        self.assertEqual(rows[0]["normalizer"]["symbol"], "Y")

    def test_catalog_full_listing(self):
        rows = self.ok_json(["catalog", "--pmax", "12"], "catalog.schema.json")
        orders = {r["symbol"]: r["order"] for r in rows}
        self.assertEqual(orders["IxY"], 120)
        self.assertEqual(orders["OT"], 24)

    def test_cores_and_extensions(self):
        cores = self.ok_json(["catalog", "--cores", "--pmax", "3"], "labels.schema.json")
        self.assertIn("T", [c["symbol"] for c in cores])
        ext = self.ok_json(["catalog", "--extensions-of", "T"], "labels.schema.json")
        self.assertEqual([e["symbol"] for e in ext], ["O"])
        self.assertEqual(self.ok_json(["catalog", "--extensions-of", "Y"], "labels.schema.json"), [])

    def test_decompose_icosahedral(self):
        d = self.ok_json(["group", "decompose", group_file("icosa.json")], "decompose.schema.json")
        self.assertEqual(d["krh"]["K"]["name"], "Y")
        r = d["krh"]["r"]
        self.assertEqual(r, [[-1, 0, 0], [0, -1, 0], [0, 0, -1]])
        self.assertIsNone(d["krh"]["h"])

    def test_sum_gives_identical_components(self):
        a = group_file("antisym3.json")
        s = self.ok_json(["group", "sum", a, a, a], "group.schema.json")
        self.assertEqual(s["n"], 9)
        d = self.ok_json(["group", "decompose", "-"], "decompose.schema.json", stdin=json.dumps(s))
        comps = d["components"]
        self.assertEqual(len(comps), 3)
        strip = [{k: v for k, v in c.items() if k != "bodies"} for c in comps]
        self.assertTrue(all(c == strip[0] for c in strip))

    def test_build_is_a_fixed_point_of_decompose(self):
        for name in ("icosa.json", "tetra12.json", "dihedral4.json", "antisym3.json"):
            d1 = self.ok_json(["group", "decompose", group_file(name)], "decompose.schema.json")
            built = self.ok_json(["group", "build", "-"], "group.schema.json", stdin=json.dumps(d1))
            d2 = self.ok_json(["group", "decompose", "-"], "decompose.schema.json", stdin=json.dumps(built))
            self.assertEqual(d1, d2, name)

    def test_check_report(self):
        rep = self.ok_json(["group", "check", group_file("antisym3.json")], "report.schema.json")
        self.assertTrue(rep["theorem_A"])
        rep = self.ok_json(["group", "check", group_file("icosa.json"), "--omega", "0,0,0"], "report.schema.json")
        self.assertTrue(rep["theorem_A"])
        self.assertFalse(rep["type_R"])

    def test_svar(self):
        r = run("svar", "--s", "1,0,0", "--delta", "0,1,0", "--alpha", "1")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertLess(float(r.stdout), 0)
        r = run("svar", "--s", "1,0,0", "--delta", "0,0,0")
        self.assertEqual(float(r.stdout), 0.0)
        self.assert_error(run("svar", "--s", "1,0,0", "--delta", "0,1,0", "--alpha", "2"), "unsupported-exponent")

    def test_minimize_verify_plot(self):
        with tempfile.TemporaryDirectory() as tmp:
            traj = os.path.join(tmp, "traj.json")
            report = os.path.join(tmp, "report.json")
            r = run("minimize", "--group", group_file("antisym3.json"), "--modes", "12", "--seed", "3",
                    "--out", traj, "--report", report, "--traj-samples", "8")
            self.assertEqual(r.returncode, 0, r.stderr)
            rep = json.loads(r.stdout)
            jsonschema.validate(rep, schema("minimize_report.schema.json"))
            with open(report) as f:
                self.assertEqual(json.load(f), rep)
            self.assertTrue(rep["collisionless"])
            self.assertLess(rep["grad_norm"], 1e-8)
            with open(traj) as f:
                t = json.load(f)
            jsonschema.validate(t, schema("trajectory.schema.json"))
            self.assertEqual(len(t["samples"]), 8)

            v = self.ok_json(["verify", traj], "verify.schema.json")
            self.assertLess(v["ode_residual"], 1e-5)
            self.assertEqual(v["action"], rep["final_action"])

            a = run("plot", traj)
            b = run("plot", traj)
            self.assertEqual(a.returncode, 0, a.stderr)
            self.assertEqual(a.stdout, b.stdout)
            self.assertIn("<svg", a.stdout)
            svg = os.path.join(tmp, "t.svg")
            self.assertEqual(run("plot", traj, "--view", "1,0,0", "--out", svg).returncode, 0)
            with open(svg) as f:
                self.assertIn("</svg>", f.read())
            c = run("plot", traj, "--format", "csv", "--samples", "4")
            lines = c.stdout.strip().splitlines()
            self.assertEqual(lines[0], "t,body,x,y,z")
            self.assertEqual(len(lines), 1 + 4 * 3)

    def test_errors(self):
        self.assert_error(run("group", "build", "/nonexistent/group.json"), "io")
        self.assert_error(run("group", "build", "-", stdin="{not json"), "parse-error")
        self.assert_error(run("verify", "-", stdin="{}"))
        self.assert_error(run("catalog", "--family", "Q"), "invalid-parameter")
        zero_based = json.dumps({"n": 2, "generators": [
            {"tau": {"kind": "rotation", "offset": "1/2"}, "rho": "identity", "sigma": [0, 1]}]})
        self.assert_error(run("group", "decompose", "-", stdin=zero_based), "parse-error")

    def test_unknown_flags_rejected(self):
        self.assert_error(run("catalog", "--bogus"), "usage")
        self.assert_error(run("minimize", "--group", group_file("antisym3.json"), "--speed", "3"), "usage")
        self.assert_error(run("frobnicate"), "usage")

    def test_every_subcommand_has_help(self):
        for args in (["catalog"], ["group"], ["group", "build"], ["group", "check"], ["group", "decompose"],
                     ["group", "sum"], ["svar"], ["minimize"], ["verify"], ["plot"]):
            r = run(*args, "--help")
            self.assertEqual(r.returncode, 0, args)
            self.assertIn("Usage", r.stdout)


if __name__ == "__main__":
    EXE, ROOT = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
