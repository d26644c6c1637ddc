import logging
import sys

DEFAULT_LOGGER_NAME = "clifford_coxeter"


class LoggerConfig:
    """Centralized logging configuration for the command-line runs"""

    def __init__(self, name=None, log_level=logging.INFO, log_file=None,
                 console_format=None, file_format=None, stream=None):
        self.name = name or DEFAULT_LOGGER_NAME
        self.log_level = self._level(log_level)
        self.log_file = log_file
        self.console_format = console_format or "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        self.file_format = file_format or "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
        # stderr by default: stdout carries JSON results
        self.stream = stream or sys.stderr
        self.logger = None

    @staticmethod
    def _level(level):
        """Accept logging constants or names such as 'debug'"""
        if isinstance(level, str):
            value = logging.getLevelName(level.upper())
            if not isinstance(value, int):
                raise ValueError(f"Unknown log level: {level}")
            return value
        return level

    def setup_logger(self):
        """Configure the named logger and the library module loggers under it"""
        logging.basicConfig(
            level=self.log_level,
            format=self.console_format,
            handlers=[]
        )

        self.logger = logging.getLogger(self.name)
        self.logger.handlers.clear()
        self.logger.setLevel(self.log_level)

        console_handler = logging.StreamHandler(self.stream)
        console_handler.setLevel(self.log_level)
        console_handler.setFormatter(logging.Formatter(self.console_format))
        self.logger.addHandler(console_handler)

        if self.log_file:
            self._attach_file_handler(self.log_file)

        # Library modules log under their own names; route them through the same handlers
        root = logging.getLogger()
        root.setLevel(self.log_level)
        for handler in root.handlers[:]:
            root.removeHandler(handler)
        for handler in self.logger.handlers:
            root.addHandler(handler)
        self.logger.propagate = False

        return self.logger

    def _attach_file_handler(self, filepath):
        file_handler = logging.FileHandler(filepath)
        file_handler.setLevel(self.log_level)
        file_handler.setFormatter(logging.Formatter(self.file_format))
        self.logger.addHandler(file_handler)
        return file_handler

    def get_logger(self):
        """Get the configured logger instance"""
        if not self.logger:
            return self.setup_logger()
        return self.logger

    def set_level(self, level):
        """Change the logging level"""
        self.log_level = self._level(level)
        if self.logger:
            self.logger.setLevel(self.log_level)
            logging.getLogger().setLevel(self.log_level)
            for handler in self.logger.handlers:
                handler.setLevel(self.log_level)

    def add_file_handler(self, filepath):
        """Add a file handler to the existing logger"""
        if not self.logger:
            self.setup_logger()
        handler = self._attach_file_handler(filepath)
        logging.getLogger().addHandler(handler)

    def remove_handlers(self):
        """Remove and close all handlers installed by this config"""
        if self.logger:
            root = logging.getLogger()
            for handler in self.logger.handlers[:]:
                self.logger.removeHandler(handler)
                if handler in root.handlers:
                    root.removeHandler(handler)
                handler.close()
