from utils import TaskResult
from wcop.checks import run_suite


def run(config, report):
    """ Полный набор проверок свойств """
    run_suite(config, report)
    passed = sum(r.passed for r in report.records)
    return TaskResult(result={"checks": len(report.records), "passed": passed})
