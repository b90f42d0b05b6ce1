"""Configuration settings for the qkdsim uplink simulator."""

import os


class Config:
    """Base configuration class."""

    VERSION = '1.0.0'

    # Logging configuration
    LOG_LEVEL = os.environ.get('QKDSIM_LOG_LEVEL', 'INFO').upper()

    # Monte Carlo guard: maximum number of generated detection events
    MAX_EVENTS = int(os.environ.get('QKDSIM_MAX_EVENTS', 100_000_000))

    # CSV output: significant digits of every numeric cell
    CSV_DIGITS = int(os.environ.get('QKDSIM_CSV_DIGITS', 9))


class DevelopmentConfig(Config):
    """Development configuration."""
    LOG_LEVEL = os.environ.get('QKDSIM_LOG_LEVEL', 'DEBUG').upper()


class ProductionConfig(Config):
    """Production configuration."""
    LOG_LEVEL = os.environ.get('QKDSIM_LOG_LEVEL', 'WARNING').upper()


def get_config():
    """Get configuration based on environment."""
    env = os.environ.get('QKDSIM_ENV', 'production')
    if env == 'development':
        return DevelopmentConfig()
    return ProductionConfig()
