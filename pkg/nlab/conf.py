import os

from nlab.exception import NLabInvalidArgumentType, NLabInvEnvValue

_TRUE = ("1", "true", "yes", "on", "y", "t")
_FALSE = ("0", "false", "no", "off", "n", "f")


def parse_bool(value):
    """Строковый флаг в bool (замена distutils.util.strtobool)."""
    if isinstance(value, bool):
        return value
    value = str(value).strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ValueError("Invalid truth value: %r" % value)


def parse_complex(value):
    """Complex number from a [re, im] pair, a number or a string like '1+2j'."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("Complex pair must have two items: %r" % (value,))
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return complex(value)


def _read_conf_value(config, path):
    if isinstance(config, dict):
        paths = path.split(".")
        while paths:
            config = config.get(paths[0], {} if len(paths) > 1 else None)
            paths = paths[1:]
    elif path:
        raise ValueError("Non-dict like can't have path")

    return config


def conf_attr(config, *, path=None, parse_value=None, env=None, default=None, parse_env=None):
    """Значение настройки: переменная окружения > конфиг > значение по умолчанию.

    :param config: словарь конфигурации (или само значение, если path не задан)
    :param path: путь вида "grid.radial_levels"
    :param parse_value: приведение типа
    :param env: имя переменной окружения, перекрывающей конфиг
    :param default: значение по умолчанию
    :param parse_env: предварительный разбор строки из окружения
    """
    value = default

    if env is not None and os.getenv(env):
        value = os.getenv(env)
        try:
            if parse_env is not None:
                value = parse_env(value)
            value = parse_value(value) if parse_value else value
        except ValueError as e:
            raise NLabInvEnvValue(env, value) from e
        return value

    conf_value = _read_conf_value(config, path) if path else config
    if conf_value is not None:
        value = conf_value

    if parse_value is not None and value is not None:
        try:
            value = parse_value(value)
        except (TypeError, ValueError) as e:
            raise NLabInvalidArgumentType(path, value) from e

    return value


def env_attr(name, *, parse_value=None, default=None):
    """Shortcut for settings: read one environment variable."""
    return conf_attr(None, env=name, parse_value=parse_value, default=default)


def test_conf():
    assert _read_conf_value({"a": {"b": 1}}, "a.b") == 1

    assert conf_attr("1", parse_value=int) == 1
    assert conf_attr({"a": {"b": "1"}}, path="a.b", parse_value=int) == 1
    assert conf_attr({"a": {"b": "1"}}, path="a.c", parse_value=int) is None
    assert conf_attr({"a": {"z": [1, 2]}}, path="a.z", parse_value=parse_complex) == 1 + 2j
    assert parse_bool("Yes") is True


if __name__ == "__main__":
    test_conf()
