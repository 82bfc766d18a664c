import logging
import os
from pathlib import Path

# Logging level shared by every module of the package.
LOGGING_LEVEL = os.environ.get("CROSSDEP_LOG_LEVEL", "ERROR")

# Configure the logging tool in the configuration module.
logger = logging.getLogger(__name__)
logger.setLevel(LOGGING_LEVEL)


def _numeric_environment_variable(name: str, default: str, cast):
    # Read the raw value and convert it to the requested numeric type.
    value = os.environ.get(name, default)
    try:
        return cast(value)
    except ValueError as error:
        logger.error(error)
        raise ValueError("The '{0}' environment variable must be numeric, got '{1}'.".format(name, value))


# Initialize constants with parameters to configure.
SLOT_MINUTES = _numeric_environment_variable("CROSSDEP_SLOT_MINUTES", "30", int)
THRESHOLD = _numeric_environment_variable("CROSSDEP_THRESHOLD", "0.2", float)
HORIZON_MINUTES = _numeric_environment_variable("CROSSDEP_HORIZON_MINUTES", "60", int)
MINUTES_PER_DAY = 1440

# Directories with the fixtures shipped inside the package.
DATA_DIRECTORY = Path(__file__).resolve().parent / "data"
RULES_DIRECTORY = DATA_DIRECTORY / "rules"
SCENARIOS_DIRECTORY = DATA_DIRECTORY / "scenarios"


def seeds_directory() -> Path:
    """
    The seed directory is resolved on every call so that CROSSDEP_SEEDS can be changed between invocations.
    """
    override = os.environ.get("CROSSDEP_SEEDS")
    if override:
        return Path(override)
    return DATA_DIRECTORY / "seeds"
