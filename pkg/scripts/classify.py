import logging

from nlab.exception import DomainError
from utils import TaskResult
from wcop.factory import ExperimentFactory
from wcop.moebius import MoebiusTransform, classify

logger = logging.getLogger(__name__)


def run(config, report):
    """ Классификация автоморфизма круга """
    phi = ExperimentFactory(config).create_selfmap()
    if not isinstance(phi, MoebiusTransform):
        raise DomainError("not a disc automorphism", witness={"kind": config.operator.phi["kind"]})

    cls = classify(phi)
    logger.info("classified %s as %s", config.operator.phi["kind"], cls.tag)

    result = cls.to_dict()
    result["map"] = phi.to_dict()
    dw = cls.denjoy_wolff_point
    result["denjoy_wolff_point"] = None if dw is None else [dw.real, dw.imag]
    return TaskResult(result=result)
