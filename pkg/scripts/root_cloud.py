import os

from utils import TaskResult
from wcop.factory import ExperimentFactory
from wcop.report import write_cloud_csv
from wcop.spectra import elliptic_root_cloud, root_cloud_coverage


def run(config, report):
    """ Облако корней для периодического эллиптического символа """
    factory = ExperimentFactory(config)
    op = factory.create_operator()
    grid = factory.create_grid()

    prediction = elliptic_root_cloud(op, grid)
    path = write_cloud_csv(prediction.shape.points, os.path.join(config.output_dir, "root-cloud.csv"))

    result = prediction.to_dict()
    result["coverage"] = root_cloud_coverage(op, grid) if grid.radial_levels > 1 else None
    result["cloud"] = os.path.basename(path)
    return TaskResult(result=result, extra={"cloud": path})
