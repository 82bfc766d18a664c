import logging
from pathlib import Path
from queue import Queue
from threading import Thread
from typing import Any, Callable, Dict, List, Union

from crossdep import config
from crossdep.errors import CrossdepError, MalformedInput, UnreadableFile

# Configure the logging tool in the utilities module.
logger = logging.getLogger(__name__)
logger.setLevel(config.LOGGING_LEVEL)


class InvalidTask(CrossdepError):
    pass


def run_multithreading_tasks(functions: List[Dict[str, Union[Callable, Dict[str, Any]]]]) -> Dict[str, Any]:
    """
    Run every task in its own thread and merge the dictionaries the tasks put in the shared queue.

    Each task is a dictionary with the `function_object` to call and its `function_arguments`.
    The queue is passed to the function as the `queue` keyword argument. The first exception
    raised by any task is re-raised after all threads have finished.
    """
    # Create the empty list to save all parallel threads.
    threads = []

    # Create the queue to store all results of functions.
    queue = Queue()

    # Create the thread for each function.
    for position, function in enumerate(functions):
        # Check whether the input arguments have keys in their dictionaries.
        try:
            function_object = function["function_object"]
        except KeyError as error:
            logger.error(error)
            raise InvalidTask("The task has no {0} key.".format(error))
        try:
            function_arguments = dict(function["function_arguments"])
        except KeyError as error:
            logger.error(error)
            raise InvalidTask("The task has no {0} key.".format(error))

        # Add the instance of the queue to the list of function arguments.
        function_arguments["queue"] = queue

        # Create the thread.
        thread = Thread(target=_guarded, args=(position, function_object, function_arguments, queue))
        threads.append(thread)

    # Start all parallel threads.
    for thread in threads:
        thread.start()

    # Wait until all parallel threads are finished.
    for thread in threads:
        thread.join()

    # Get the results of all threads.
    results, errors = {}, []
    while not queue.empty():
        item = queue.get()
        if "__error__" in item:
            errors.append(item["__error__"])
        else:
            results = {**results, **item}

    # Re-raise the failure of the earliest task.
    if errors:
        raise min(errors, key=lambda item: item[0])[1]

    # Return the results of all threads.
    return results


def _guarded(position: int, function_object: Callable, function_arguments: Dict[str, Any], queue: Queue) -> None:
    try:
        function_object(**function_arguments)
    except Exception as error:
        queue.put({"__error__": (position, error)})


def read_text_file(path: Union[str, Path]) -> str:
    # Read the file as UTF-8 text; encoding problems are input errors, missing files are usage errors.
    try:
        with open(path, "r", encoding="utf-8", newline="") as file:
            return file.read()
    except UnicodeDecodeError as error:
        logger.error(error)
        raise MalformedInput("The file is not valid UTF-8: {0}".format(error), file=str(path))
    except OSError as error:
        logger.error(error)
        raise UnreadableFile("Unable to read the file: {0}".format(error.strerror or error), file=str(path))
