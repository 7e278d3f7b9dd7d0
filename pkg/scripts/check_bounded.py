from utils import TaskResult
from wcop.factory import ExperimentFactory
from wcop.operators import Space, check_bounded, check_contractive_multiplier


def run(config, report):
    """ Проверка ограниченности оператора на сетке """
    factory = ExperimentFactory(config)
    op = factory.create_operator()
    grid = factory.create_grid()

    result = check_bounded(op, grid).to_dict()
    if op.space == Space.BLOCH:
        result["contractive_multiplier_criterion"] = check_contractive_multiplier(op.phi, grid).to_dict()
    return TaskResult(result=result)
