import unittest

from presets import (CASE_TABLE, NEGATIVE_CONTROLS, REFUTED_ITEMS, UnknownPreset, case_table_labels,
                     expected_star_status, resolve_preset)

SUBSYSTEM_SIZES = {
    "E7:A7": 56, "E6:A5+A1": 32, "E8:A8": 72, "E6:D5": 40, "E7:E6": 72, "E7:A5+A2": 36,
    "E7:2A3+A1": 26, "E8:A1+A7": 58, "E8:D5+A3": 52, "E8:2A4": 40, "E8:4A2": 24, "E6:3A2": 18,
    "E8:E6+A2": 78, "E7:D6+A1": 62, "E8:D8": 112, "E8:E7+A1": 128, "E7:D4+3A1": 30,
    "E8:D6+2A1": 64, "E8:2D4": 48, "E7:7A1": 14, "D4:4A1": 8, "D6:6A1": 12, "E8:8A1": 16,
    "A2:A1": 2, "A3:2A1": 4, "D4:2A1": 4,
}


class TestPresets(unittest.TestCase):

    def test_case_table_labels(self):
        labels = case_table_labels()
        self.assertEqual(len(CASE_TABLE), 22)
        self.assertIn("D4:4A1", labels)
        self.assertIn("D6:6A1", labels)
        self.assertNotIn("D2m:2mA1", labels)

    def test_subsystem_sizes(self):
        for label in case_table_labels() + sorted(NEGATIVE_CONTROLS):
            system, delta = resolve_preset(label)
            self.assertEqual(len(delta), SUBSYSTEM_SIZES[label], label)
            self.assertTrue(delta.is_closed, label)
            self.assertTrue(delta.is_symmetric, label)

    def test_rank_family(self):
        system, delta = resolve_preset("D8:8A1")
        self.assertEqual(system.label, "D8")
        self.assertEqual(len(delta), 16)

    def test_expected_statuses(self):
        statuses = {label: expected_star_status(label) for label in case_table_labels()}
        self.assertEqual(sorted(l for l, s in statuses.items() if s == "fail"), sorted(REFUTED_ITEMS))
        self.assertEqual(expected_star_status("E7:A7"), "ok")
        self.assertEqual(expected_star_status("D8:8A1"), "ok")
        for label in NEGATIVE_CONTROLS:
            self.assertEqual(expected_star_status(label), "fail")
        with self.assertRaises(UnknownPreset):
            expected_star_status("E7:A6")

    def test_unknown_presets(self):
        for label in ("E7:A6", "D5:5A1", "D2:2A1", "G2:A1"):
            with self.assertRaises(UnknownPreset):
                resolve_preset(label)


if __name__ == '__main__':
    unittest.main()
