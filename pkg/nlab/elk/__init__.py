import json
import logging
import os
from dataclasses import dataclass
from typing import Optional

import logstash_async.formatter
import logstash_async.handler

from nlab.conf import parse_bool
from nlab.exception import NLabInvEnvValue

# Логи экспериментов: stderr и, если задан WCOP_ELK_HOST, очередь logstash.

ENV_PREFIX = "WCOP_ELK_"
STDERR_FORMAT = "%(asctime)s %(name)-20s %(levelname)-7s %(message)s"

# поля, которые в elk поднимаются из extra на верхний уровень документа
LIFTED_FIELDS = ("experiment", "command", "module_name")


class StderrFormatter(logging.Formatter):
    """Строка лога с контекстом эксперимента в виде JSON в конце."""

    def __init__(self):
        super().__init__(fmt=STDERR_FORMAT)

    def format(self, record):
        line = super().format(record)
        context = getattr(record, "context", None)
        if context:
            line += " " + json.dumps(context, ensure_ascii=False, sort_keys=True, default=str)
        return line


class ElkFormatter(logstash_async.formatter.LogstashFormatter):
    def format(self, record):
        document = json.loads(super().format(record))
        extra = document.get("extra", {})
        context = extra.pop("context", None) or {}
        for name in LIFTED_FIELDS:
            value = extra.pop(name, context.pop(name, None))
            if value is not None:
                document[name] = value
        if context:
            extra["context"] = context
        return json.dumps(document, default=str)


class Adapter(logging.LoggerAdapter):
    """Добавляет имя модуля и контекст эксперимента (seed, хеш конфига) в каждую запись."""

    def __init__(self, logger, module_name, context=None):
        context = dict(context or {})
        context["module_name"] = "wcop." + str(module_name)
        super().__init__(logger, context)

    def process(self, msg, kwargs):
        context = dict(self.extra)
        context.update(kwargs.get("extra", {}))
        kwargs["extra"] = {"context": context}
        return msg, kwargs


@dataclass
class ElkOptions:
    host: Optional[str] = None
    port: int = 5959
    level: object = logging.WARNING
    enabled: bool = True
    to_stderr: bool = True

    def read_env(self):
        """WCOP_ELK_HOST/PORT/LEVEL/ENABLE и WCOP_LOG_TO_STDERR поверх переданных значений."""
        host = os.getenv(ENV_PREFIX + "HOST")
        if host:
            self.host = host

        level = os.getenv(ENV_PREFIX + "LEVEL")
        if level:
            self.level = level.upper()

        self.port = self._parse(ENV_PREFIX + "PORT", int, self.port)
        self.enabled = self._parse(ENV_PREFIX + "ENABLE", parse_bool, self.enabled)
        self.to_stderr = self._parse("WCOP_LOG_TO_STDERR", parse_bool, self.to_stderr)
        return self

    @staticmethod
    def _parse(name, parse, current):
        value = os.getenv(name)
        if not value:
            return current
        try:
            return parse(value)
        except ValueError:
            raise NLabInvEnvValue(name, value)


def setup(experiment, command, level=logging.WARNING, host=None, port=5959,
          queue_path=".wcop-logstash.db", to_stderr=True, env=True):
    """Настройка корневого логгера для одного запуска команды.

    :param experiment: имя набора экспериментов, уходит в поле `experiment`
    :param command: подкоманда CLI
    :param level: уровень логирования
    :param host: сервер logstash; без него записи идут только в stderr
    :param port: порт logstash
    :param queue_path: файл очереди AsynchronousLogstashHandler
    :param to_stderr: писать ли записи в stderr
    :param env: читать ли WCOP_ELK_* из окружения
    """
    options = ElkOptions(host, port, level, True, to_stderr)
    if env:
        options.read_env()

    root = logging.getLogger()
    root.propagate = False
    root.handlers.clear()

    if options.to_stderr:
        stream = logging.StreamHandler()
        stream.setFormatter(StderrFormatter())
        root.addHandler(stream)

    if options.enabled and options.host:
        handler = logstash_async.handler.AsynchronousLogstashHandler(options.host, options.port,
                                                                     database_path=queue_path)
        handler.setFormatter(ElkFormatter(extra={"experiment": experiment, "command": command}))
        root.addHandler(handler)

    root.setLevel(options.level)
    return root


def get(module_name, **context):
    """Логгер модуля с контекстом эксперимента."""
    return Adapter(logging.getLogger("wcop." + module_name), module_name, context)
