import os
import unittest
from unittest import mock

from logic_workbench import limits


class TestLimits(unittest.TestCase):
    def tearDown(self):
        limits.set_witness_bound(64)
        limits.set_fuel(10_000)
        super().tearDown()

    def test_set_witness_bound(self):
        limits.set_witness_bound(500)
        self.assertEqual(limits.get_witness_bound(), 500)

    def test_bound_above_ceiling(self):
        with self.assertRaises(ValueError):
            limits.set_fuel(limits.get_fuel.ceiling + 1)
        self.assertEqual(limits.get_fuel(), 10_000)

    def test_negative_bound(self):
        self.assertRaises(ValueError, limits.set_witness_bound, -1)
        self.assertRaises(ValueError, limits.set_witness_bound, 2.5)

    def test_check_bound(self):
        self.assertEqual(limits.check_bound('fuel', None, limits.get_fuel), 10_000)
        self.assertEqual(limits.check_bound('fuel', 7, limits.get_fuel), 7)
        self.assertRaises(ValueError, limits.check_bound, 'fuel', -3, limits.get_fuel)
        self.assertRaises(ValueError, limits.check_bound, 'qe bound', 41, limits.get_qe_bound)


class TestWorkers(unittest.TestCase):

    def test_default(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(limits.get_workers(), 1)

    def test_from_environment(self):
        with mock.patch.dict(os.environ, {limits.WORKERS_ENV_VAR: '4'}):
            self.assertEqual(limits.get_workers(), 4)
        with mock.patch.dict(os.environ, {limits.WORKERS_ENV_VAR: '1000'}):
            self.assertEqual(limits.get_workers(), 64)

    def test_invalid_value(self):
        with mock.patch.dict(os.environ, {limits.WORKERS_ENV_VAR: 'many'}):
            self.assertEqual(limits.get_workers(), 1)
