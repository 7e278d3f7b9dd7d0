import logging
import os

import numpy as np

from utils import TaskResult
from wcop.factory import ExperimentFactory
from wcop.operators import taylor_truncation
from wcop.report import write_cloud_csv
from wcop.spectra import truncation_eigenvalues

logger = logging.getLogger(__name__)


def run(config, report):
    """
    Собственные значения усечений оператора в базисе z^k.
    Результат исследовательский: записи проверок не формируются.
    """
    op = ExperimentFactory(config).create_operator()

    truncations, extra = [], {}
    for size in config.truncation_sizes:
        eigenvalues = truncation_eigenvalues(taylor_truncation(op, size))
        moduli = np.abs(eigenvalues)
        name = "truncate-eigs.N%d.csv" % size
        extra[size] = write_cloud_csv(eigenvalues, os.path.join(config.output_dir, name))
        truncations.append({
            "size": size,
            "max_modulus": float(moduli.max()),
            "min_modulus": float(moduli.min()),
            "cloud": name,
        })
        logger.info("N=%d: |lambda| in [%.6g, %.6g]", size, moduli.min(), moduli.max())

    return TaskResult(result={"exploratory": True, "truncations": truncations}, extra=extra)
