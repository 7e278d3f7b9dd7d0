from utils import TaskResult
from wcop.factory import ExperimentFactory
from wcop.operators import check_invertible


def run(config, report):
    """ Проверка обратимости оператора """
    factory = ExperimentFactory(config)
    result = check_invertible(factory.create_operator(), factory.create_grid(),
                              config.tolerances.bounded_away)
    return TaskResult(result=result.to_dict())
