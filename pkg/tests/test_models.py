import numpy as np
import pytest

from py_regraph.models import (
    AdmissibleSet,
    LawParams,
    ModelValidationError,
    OmegaBarReport,
    RunConfig,
    ScResiduals,
    SpectralPoint,
    SpectrumRecord,
)


def _run(**changes):
    values = dict(
        subcommand="sample",
        n=10,
        d=3,
        ell=1,
        c=0.4,
        a=0.5,
        omega_d=1,
        z=(),
        samples=1,
        seed=0,
        output=None,
        format="csv",
        workers=1,
        sizes=(10,),
    )
    values.update(changes)
    return RunConfig(**values)


def test_spectral_point():
    p = SpectralPoint.from_complex(1.5 + 0.2j)
    assert p.z == 1.5 + 0.2j
    assert p.kappa == pytest.approx(0.5)
    assert SpectralPoint.of(p) is p
    with pytest.raises(ModelValidationError):
        SpectralPoint(E=0.0, eta=0.0)
    with pytest.raises(ModelValidationError):
        SpectralPoint(E=float("nan"), eta=1.0)


def test_law_params():
    for bad in (dict(d=2), dict(c=0.6), dict(a=1.0), dict(ell=0)):
        values = dict(d=3, a=0.5, c=0.4, ell=1)
        values.update(bad)
        with pytest.raises(ModelValidationError):
            LawParams(**values)


def test_census_verdict_is_checked():
    with pytest.raises(ModelValidationError):
        OmegaBarReport(
            radius=1,
            excess_cap=1,
            bad_vertex_count=0,
            max_excess=0,
            threshold=1.0,
            holds=False,
        )


def test_residuals_are_consistent():
    with pytest.raises(ModelValidationError):
        ScResiduals(q=1j, y_of_q=0.5j, x_of_q=0j, q_minus_y=0j, m_minus_x=0j, phi=0.1)


def test_admissible_set_from_flags():
    s = AdmissibleSet.from_flags([1, 0, True, False])
    assert s.indices == (0, 2)
    with pytest.raises(ModelValidationError):
        AdmissibleSet(flags=(True,), indices=())


def test_spectrum_record_checks_top_eigenvalue():
    top = 3 / np.sqrt(2)
    SpectrumRecord(n=3, d=3, seed=None, eigenvalues=np.array([top, 0.1, -1.0]))
    with pytest.raises(ModelValidationError):
        SpectrumRecord(n=3, d=3, seed=None, eigenvalues=np.array([2.0, 0.1, -1.0]))
    with pytest.raises(ModelValidationError):
        SpectrumRecord(n=3, d=3, seed=None, eigenvalues=np.array([top, -1.0, 0.1]))


def test_run_config_validation():
    with pytest.raises(ModelValidationError, match=r"n\*d must be even"):
        _run(n=5, sizes=(5,))
    with pytest.raises(ModelValidationError, match="Unknown subcommand"):
        _run(subcommand="plot")
    with pytest.raises(ModelValidationError, match="csv or json"):
        _run(format="xml")
    with pytest.raises(ModelValidationError, match="ascending"):
        _run(subcommand="edge-scan", sizes=(20, 10))
    with pytest.raises(ModelValidationError, match="--z"):
        _run(subcommand="greens")
    with pytest.raises(ModelValidationError):
        _run(subcommand="greens", z=(0.5 + 0.0j,))
    assert _run(subcommand="report", n=5, d=3).subcommand == "report"
    assert _run(subcommand="gamma", n=5).n == 5


def test_provenance_omits_output_and_workers():
    a = _run(output="a.csv", workers=1).as_dict()
    b = _run(output="b.csv", workers=8).as_dict()
    assert a == b
    assert "output" not in a and "workers" not in a
