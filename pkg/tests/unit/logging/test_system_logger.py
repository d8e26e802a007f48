# tests/unit/logging/test_system_logger.py
import datetime
import logging
import os
import shutil
import tempfile
import unittest
from logging.handlers import RotatingFileHandler

from src.utils.logging import PACKAGE_LOGGER, configure_logging, setup_logger


def _console_handlers(logger):
    return [h for h in logger.handlers if not isinstance(h, logging.FileHandler)]


class TestSystemLogger(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.log_config = {
            'level': 'INFO',
            'format': '%(levelname)s - %(message)s',
            'console_enabled': True,
            'file_enabled': False,
            'paths': {'system_logs': os.path.join(self.temp_dir, 'system')},
            'rotation': {'max_bytes': 1024 * 1024, 'backup_count': 2},
        }

    def tearDown(self):
        logger = logging.getLogger(PACKAGE_LOGGER)
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()
        shutil.rmtree(self.temp_dir)

    def test_setup_logger_with_file(self):
        log_file = os.path.join(self.temp_dir, 'nested', 'run.log')
        logger = setup_logger('test_hbf_logger', log_level='DEBUG', log_file=log_file)

        self.assertEqual(len(logger.handlers), 2)
        self.assertTrue(any(isinstance(h, RotatingFileHandler) for h in logger.handlers))

        logger.debug('altmin converged')
        for handler in logger.handlers:
            handler.flush()
        with open(log_file) as f:
            self.assertIn('altmin converged', f.read())

        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

    def test_reconfigure_replaces_handlers(self):
        configure_logging(self.log_config)
        logger = configure_logging(self.log_config)
        self.assertEqual(len(logger.handlers), 1)
        self.assertEqual(logger.name, PACKAGE_LOGGER)

    def test_console_levels(self):
        # Quiet keeps warnings on the console
        logger = configure_logging(self.log_config, quiet=True)
        self.assertEqual(_console_handlers(logger)[0].level, logging.WARNING)
        self.assertEqual(logger.level, logging.INFO)

        logger = configure_logging(self.log_config, verbose=True)
        self.assertEqual(_console_handlers(logger)[0].level, logging.DEBUG)
        self.assertEqual(logger.level, logging.DEBUG)

    def test_console_disabled(self):
        self.log_config['console_enabled'] = False
        logger = configure_logging(self.log_config)
        self.assertEqual(logger.handlers, [])

    def test_dated_system_log(self):
        self.log_config['file_enabled'] = True
        logger = configure_logging(self.log_config)

        stamp = datetime.datetime.now().strftime('%Y%m%d')
        expected = os.path.join(self.temp_dir, 'system', f'system_{stamp}.log')
        self.assertTrue(os.path.exists(expected))

        file_handlers = [h for h in logger.handlers if isinstance(h, RotatingFileHandler)]
        self.assertEqual(len(file_handlers), 1)
        self.assertEqual(file_handlers[0].backupCount, 2)
        self.assertEqual(file_handlers[0].maxBytes, 1024 * 1024)

    def test_module_loggers_propagate(self):
        self.log_config['file_enabled'] = True
        configure_logging(self.log_config)

        logging.getLogger('src.algorithms.altmin').info('sweep step')
        for handler in logging.getLogger(PACKAGE_LOGGER).handlers:
            handler.flush()

        stamp = datetime.datetime.now().strftime('%Y%m%d')
        with open(os.path.join(self.temp_dir, 'system', f'system_{stamp}.log')) as f:
            self.assertIn('INFO - sweep step', f.read())


if __name__ == '__main__':
    unittest.main()
