import numpy as np

from utils import TaskResult
from wcop.factory import ExperimentFactory
from wcop.spectra import conjecture_probe


def run(config, report):
    """ Нормы резольвент усечений внутри гиперболического кольца """
    factory = ExperimentFactory(config)
    result = conjecture_probe(factory.create_operator(), config.probe_samples, factory.create_grid(),
                              sizes=config.truncation_sizes, rng=np.random.default_rng(config.seed))
    return TaskResult(result=result)
