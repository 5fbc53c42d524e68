import json
import os
import unittest

from cli import main

TEST_JSON_FILE = 'test_cli_output.json'


class TestCli(unittest.TestCase):

    def tearDown(self):
        if os.path.exists(TEST_JSON_FILE):
            os.remove(TEST_JSON_FILE)

    def _load(self):
        with open(TEST_JSON_FILE, 'r') as f:
            return json.load(f)

    def test_roots(self):
        self.assertEqual(main(["roots", "--system", "E7", "--json", TEST_JSON_FILE]), 0)
        data = self._load()
        self.assertEqual(data["roots"], 126)
        self.assertEqual(data["highest_root_coefficients"], [2, 2, 3, 4, 3, 2, 1])

    def test_star_check_and_verify(self):
        self.assertEqual(main(["star", "check", "E7:A7", "--json", TEST_JSON_FILE]), 0)
        self.assertEqual(self._load()["status"], "ok")
        self.assertEqual(main(["star", "verify", TEST_JSON_FILE]), 0)

    def test_star_counterexample(self):
        self.assertEqual(main(["star", "check", "A2:A1", "--json", TEST_JSON_FILE]), 1)
        self.assertEqual(self._load()["status"], "fail")
        self.assertEqual(main(["star", "verify", TEST_JSON_FILE]), 1)

    def test_star_explicit_subsystem(self):
        args = ["star", "check", "--system", "A3", "--subsystem", "[[2, -2, 0, 0], [0, 0, 2, -2]]",
                "--json", TEST_JSON_FILE]
        self.assertEqual(main(args), 1)
        self.assertEqual(self._load()["status"], "fail")

    def test_star_refuted_item(self):
        self.assertEqual(main(["star", "check", "E6:D5", "--json", TEST_JSON_FILE]), 1)
        data = self._load()
        self.assertEqual(data["status"], "fail")
        self.assertEqual(len(data["obstructions"]), 15)
        self.assertEqual(main(["star", "verify", TEST_JSON_FILE]), 1)

    def test_net(self):
        self.assertEqual(main(["net", "D4:4A1", "--ring", "mod:4", "--json", TEST_JSON_FILE]), 0)
        data = self._load()
        self.assertEqual(len(data["nets"]), 3)
        self.assertTrue(all(entry["passed"] for entry in data["nets"]))

    def test_group(self):
        args = ["group", "D4", "--ring", "mod:3", "--samples", "2", "--emit-matrix", "--json", TEST_JSON_FILE]
        self.assertEqual(main(args), 0)
        data = self._load()
        self.assertEqual(len(data["elements"]), 2)
        self.assertIn("matrix", data["elements"][0]["element"])

    def test_tandem_verify(self):
        args = ["tandem", "verify", "--system", "A3", "--ring", "mod:3", "--samples", "5", "--json", TEST_JSON_FILE]
        self.assertEqual(main(args), 0)
        self.assertEqual(self._load()["failures"], [])

    def test_tandem_extract(self):
        args = ["tandem", "extract", "D4:4A1", "--ring", "mod:3", "--seed", "1", "--json", TEST_JSON_FILE]
        self.assertEqual(main(args), 0)
        self.assertIn(self._load()["case"], (1, 2))

    def test_errors(self):
        self.assertEqual(main(["star", "check", "E7:A6"]), 2)
        self.assertEqual(main(["star", "verify", "missing_certificate.json"]), 1)
        self.assertEqual(main(["net", "D4:4A1", "--ring", "gf:9"]), 2)


if __name__ == '__main__':
    unittest.main()
