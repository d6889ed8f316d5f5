import unittest

from dmflow.models.an_dm_scheme import AnDmScheme
from dmflow.models.auto_scheme import AutoScheme
from dmflow.models.cooperative_scheme import CooperativeScheme
from dmflow.models.independent_scheme import IndependentScheme
from dmflow.scenarios.scenario import Scenario


class AutoSchemeTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.scenario = Scenario.default()

    def test_get_cooperative_scheme(self):
        self.assertTrue(isinstance(AutoScheme.get_scheme("wfrft_coop", self.scenario), CooperativeScheme))

    def test_get_independent_scheme(self):
        self.assertTrue(isinstance(AutoScheme.get_scheme("wfrft_inde", self.scenario), IndependentScheme))

    def test_get_an_dm_scheme(self):
        scheme = AutoScheme.get_scheme("an_dm", self.scenario)
        self.assertTrue(isinstance(scheme, AnDmScheme))
        self.assertEqual(scheme.beta1, 0.9)

    def test_get_unsupported_scheme(self):
        with self.assertRaisesRegex(NotImplementedError, 'Scheme "unsupported" is not supported'):
            AutoScheme.get_scheme("unsupported", self.scenario)
