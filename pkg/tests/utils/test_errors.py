import unittest

from dmflow.utils.errors import ConfigurationError, DegenerateBaselineError, FramingError, IllConditionedGeometryError


class ErrorsTest(unittest.TestCase):
    def test_configuration_error_prefixes(self):
        self.assertEqual(str(ConfigurationError("bad")), "bad")
        self.assertEqual(str(ConfigurationError("bad", key="bob1.q")), "bob1.q: bad")
        self.assertEqual(str(ConfigurationError("bad", key="ps", line=4)), "line 4: ps: bad")

    def test_all_errors_are_value_errors(self):
        for error in (
            ConfigurationError("x"),
            IllConditionedGeometryError("x", column_pair=(0, 1), condition=1e9),
            FramingError("x"),
            DegenerateBaselineError("x"),
        ):
            self.assertIsInstance(error, ValueError)
