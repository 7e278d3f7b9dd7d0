import importlib


class TaskResult:
    def __init__(self, result, extra=None):
        self.result = result
        self.extra = extra


def load_script(command):
    """
    Поиск функции run для подкоманды: `estimate-radius` -> scripts.estimate_radius.run
    """
    module = importlib.import_module("scripts." + command.replace("-", "_"))
    return getattr(module, "run")
