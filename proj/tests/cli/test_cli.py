# Copyright 2026 The ARMT Diagonal Authors
# SPDX-License-Identifier: Apache-2.0
"""End-to-end checks of armt_cli: exit codes, determinism and report schemas.

Usage: test_cli.py <armt_cli> <schemas_dir>
"""

import csv
import io
import json
import os
import pathlib
import struct
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

CLI = pathlib.Path(sys.argv[1]).resolve() if len(sys.argv) > 1 else None
SCHEMAS = pathlib.Path(sys.argv[2]).resolve() if len(sys.argv) > 2 else None

SMALL = ["--layers", "3", "--d-model", "16", "--heads", "2", "--d-ff", "32", "--vocab", "32",
         "--segment-size", "8", "--mem-tokens", "2", "--d-mem", "4"]


def run(*args, env=None):
    return subprocess.run([str(CLI), *map(str, args)], capture_output=True, text=True, env=env,
                          timeout=300)


def registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        schema = json.loads(path.read_text())
        resources.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(resources)


def validate(doc, name):
    schema = json.loads((SCHEMAS / name).read_text())
    jsonschema.Draft202012Validator(schema, registry=registry()).validate(doc)


def poison_tensor(path, name, value):
    """Overwrites every element of tensor `name` in a container file."""
    data = bytearray(path.read_bytes())
    assert data[:4] == b"ARMT"
    pos = 8 + 9 * 4 + 4 * 8 + 8
    (count,) = struct.unpack_from("<I", data, pos)
    pos += 4
    entries = []
    for _ in range(count):
        (name_len,) = struct.unpack_from("<H", data, pos)
        pos += 2
        entry_name = data[pos:pos + name_len].decode()
        pos += name_len
        dtype, rank = struct.unpack_from("<BB", data, pos)
        pos += 2
        dims = struct.unpack_from("<" + "Q" * rank, data, pos)
        pos += 8 * rank
        (offset,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        entries.append((entry_name, dtype, dims, offset))
    payload = pos
    for entry_name, dtype, dims, offset in entries:
        if entry_name != name:
            continue
        fmt, size = ("<f", 4) if dtype == 1 else ("<d", 8)
        n = 1
        for d in dims:
            n *= d
        for i in range(n):
            struct.pack_into(fmt, data, payload + offset + i * size, value)
        path.write_bytes(bytes(data))
        return
    raise KeyError(name)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = pathlib.Path(cls.tmp.name)
        cls.weights = cls.dir / "w.bin"
        r = run("init-weights", *SMALL, "--seed", "3", "--out", cls.weights)
        assert r.returncode == 0, r.stderr

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_init_weights_is_byte_identical(self):
        a, b = self.dir / "a.bin", self.dir / "b.bin"
        for p in (a, b):
            self.assertEqual(run("init-weights", *SMALL, "--seed", "3", "--out", p).returncode, 0)
        self.assertEqual(a.read_bytes(), b.read_bytes())
        self.assertEqual(a.read_bytes(), self.weights.read_bytes())
        c = self.dir / "c.bin"
        run("init-weights", *SMALL, "--seed", "4", "--out", c)
        self.assertNotEqual(a.read_bytes(), c.read_bytes())
        f32 = self.dir / "f32.bin"
        self.assertEqual(run("init-weights", *SMALL, "--dtype", "f32", "--out", f32).returncode, 0)
        self.assertLess(f32.stat().st_size, a.stat().st_size)

    def test_invalid_dimensions_exit_2(self):
        r = run("init-weights", "--d-model", "63", "--heads", "8", "--out", self.dir / "x.bin")
        self.assertEqual(r.returncode, 2)
        self.assertIn("n_heads", r.stderr)
        self.assertFalse((self.dir / "x.bin").exists())

    def test_usage_errors_exit_2(self):
        self.assertEqual(run().returncode, 2)
        self.assertEqual(run("frobnicate").returncode, 2)
        self.assertEqual(run("verify").returncode, 2)
        self.assertEqual(run("verify", "--weights", self.dir / "missing.bin").returncode, 2)
        self.assertEqual(run("verify", "--weights", self.weights, "--precision", "bf16").returncode, 2)
        self.assertEqual(run("trace", "--weights", self.weights, "--seq-len", "0",
                             "--out", self.dir / "t.json").returncode, 2)
        garbage = self.dir / "garbage.bin"
        garbage.write_bytes(b"not a container")
        self.assertEqual(run("verify", "--weights", garbage).returncode, 2)

    def test_verify_json(self):
        out = self.dir / "verify.json"
        r = run("verify", "--weights", self.weights, "--segments", "1,2,4,8", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads(out.read_text())
        validate(doc, "verify.schema.json")
        self.assertTrue(doc["pass"])
        self.assertEqual([row["segments"] for row in doc["rows"]], [1, 2, 4, 8])
        self.assertEqual(doc["rows"][0]["rel_error_f32"], 0)
        self.assertEqual(doc["rows"][0]["rel_error_f64"], 0)
        for row in doc["rows"]:
            self.assertLessEqual(row["rel_error_f64"], 1e-12)
            self.assertLessEqual(row["rel_error_f32"], 1e-3)

    def test_verify_csv_and_determinism(self):
        args = ("verify", "--weights", self.weights, "--segments", "2,3", "--report", "csv")
        a, b = run(*args), run(*args)
        self.assertEqual(a.returncode, 0)
        self.assertEqual(a.stdout, b.stdout)
        rows = list(csv.reader(io.StringIO(a.stdout)))
        self.assertEqual(rows[0], ["segments", "rel_error_f32", "rel_error_f64", "pass"])
        self.assertEqual(len(rows), 3)

    def test_verify_breach_exits_1(self):
        bad = self.dir / "bad.bin"
        bad.write_bytes(self.weights.read_bytes())
        poison_tensor(bad, "embedding", float("inf"))
        r = run("verify", "--weights", bad, "--segments", "1", "--precision", "f64")
        self.assertEqual(r.returncode, 1)
        self.assertIn("segments=1", r.stderr)

    def test_threads_env_default(self):
        env = dict(os.environ, ARMT_THREADS="3")
        r = run("verify", "--weights", self.weights, "--segments", "2", env=env)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(json.loads(r.stdout)["threads"], 3)
        r = run("verify", "--weights", self.weights, "--segments", "2", "--threads", "2", env=env)
        self.assertEqual(json.loads(r.stdout)["threads"], 2)

    def test_trace_step_counts(self):
        for kind, steps in (("diagonal", 6), ("sequential", 12)):
            out = self.dir / f"trace_{kind}.json"
            r = run("trace", "--weights", self.weights, "--seq-len", 4 * 8, "--schedule", kind,
                    "--out", out)
            self.assertEqual(r.returncode, 0, r.stderr)
            doc = json.loads(out.read_text())
            validate(doc, "trace.schema.json")
            self.assertEqual(doc["schedule_kind"], kind)
            self.assertEqual(len(doc["steps"]), steps)
            groups = [step["nodes"] for step in doc["steps"]]
            validate(groups, "schedule.schema.json")
            seen = {tuple(n) for g in groups for n in g}
            self.assertEqual(seen, {(s, l) for s in range(4) for l in range(3)})
            if kind == "diagonal":
                for i, g in enumerate(groups):
                    self.assertTrue(all(s + l == i for s, l in g))

    def test_bench_reports(self):
        out = self.dir / "bench.json"
        r = run("bench", "--weights", self.weights, "--seq-len", "16,24", "--threads", "1,2",
                "--repeat", "1", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads(out.read_text())
        validate(doc, "bench.schema.json")
        cells = {(row["mode"], row["seq_len"], row["threads"]) for row in doc["rows"]}
        for n in (16, 24):
            self.assertIn(("sequential", n, 1), cells)
            for t in (1, 2):
                self.assertIn(("diagonal", n, t), cells)
                self.assertIn(("minibatch", n, t), cells)
        r = run("bench", "--weights", self.weights, "--seq-len", "16", "--modes", "diagonal",
                "--repeat", "1", "--report", "csv")
        self.assertEqual(r.returncode, 0, r.stderr)
        rows = list(csv.reader(io.StringIO(r.stdout)))
        self.assertEqual(rows[0], ["mode", "threads", "seq_len", "segments", "wall_seconds",
                                   "seconds_per_segment", "speedup_vs_sequential"])
        self.assertEqual([row[0] for row in rows[1:]], ["diagonal"])
        self.assertEqual(run("bench", "--weights", self.weights, "--seq-len", "16",
                             "--modes", "warp").returncode, 2)


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=2)
