import unittest

from dmflow.utils.versioning import get_package_version, get_python_version, get_runtime_versions


class VersioningTest(unittest.TestCase):
    def test_runtime_versions(self):
        versions = get_runtime_versions()
        self.assertEqual(versions["python"], ".".join(str(part) for part in get_python_version()[:3]))
        self.assertIn("numpy", versions)
        self.assertIn("dmflow", versions)

    def test_missing_package(self):
        self.assertIsNone(get_package_version("dmflow_no_such_package"))
