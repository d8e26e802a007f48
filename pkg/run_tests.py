# run_tests.py
import os
import sys
import unittest

# project root on the Python path
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))


def run_tests(start_dir='tests'):
    """Run all tests under start_dir (e.g. tests/unit/algorithms)."""
    test_loader = unittest.TestLoader()
    test_suite = test_loader.discover(start_dir, pattern='test_*.py',
                                      top_level_dir=os.path.dirname(os.path.abspath(__file__)))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(test_suite)

    return 0 if result.wasSuccessful() else 1


if __name__ == '__main__':
    sys.exit(run_tests(*sys.argv[1:2]))
