from nlab.exception import PreconditionError
from utils import TaskResult
from wcop.factory import ExperimentFactory
from wcop.moebius import AutomorphismKind, classify
from wcop.operators import power_norm_bound
from wcop.spectra import spectral_radius_estimate


def run(config, report):
    """ Оценка спектрального радиуса по коциклам """
    factory = ExperimentFactory(config)
    op = factory.create_operator()
    grid = factory.create_grid()

    estimate = spectral_radius_estimate(op, config.n_schedule, grid)
    kind = classify(op.phi).kind

    tolerance = config.tolerances.checks["radius_hyperbolic" if kind == AutomorphismKind.HYPERBOLIC
                                         else "radius_parabolic"]
    report.check("spectral_radius", "cocycle-limit-" + kind.value.lower(), estimate.predicted,
                 estimate.sequence[-1], tolerance, estimate.relative_gap <= tolerance)

    result = estimate.to_dict()
    try:
        result["power_bound_roots"] = [power_norm_bound(op, n, grid, root=True) for n in config.n_schedule]
    except PreconditionError as e:
        result["power_bound_roots"] = None
        result["power_bound_note"] = e.message
    return TaskResult(result=result)
