import logging
import os

from utils import TaskResult
from wcop.factory import ExperimentFactory
from wcop.report import write_cloud_csv
from wcop.spectra import RootSetClosure, predict_spectrum

logger = logging.getLogger(__name__)


def run(config, report):
    """ Предсказание спектра по неподвижным точкам символа """
    factory = ExperimentFactory(config)
    op = factory.create_operator()
    prediction = predict_spectrum(op, factory.create_grid())

    result = prediction.to_dict()
    result["operator"] = op.to_dict()

    extra = {}
    if isinstance(prediction.shape, RootSetClosure):
        path = write_cloud_csv(prediction.shape.points, os.path.join(config.output_dir, "predict.cloud.csv"))
        result["cloud"] = os.path.basename(path)
        extra["cloud"] = path

    logger.info("prediction: %s (%s)", prediction.shape.kind, prediction.provenance.value)
    return TaskResult(result=result, extra=extra)
