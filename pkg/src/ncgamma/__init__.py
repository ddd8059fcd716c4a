"""Densities, distribution functions, asymptotic expansions and sampling for
sums and differences of two independent non-central gamma variables."""
from .specfun import (ConvergenceError, DomainError, SeriesControl, SignedLogValue,
                      DEFAULT_CONTROL)
from .exact import (CorrelatedNormalParams, Kind, OriginBehavior, PairParams, Regime,
                    SingularDensityError, from_chisquare, from_product_normal,
                    is_unimodal_at_zero, pdf_at_origin, pdf_exact, pdf_finite_series,
                    pdf_ncg)
from .quadrature import (QuadratureControl, cdf_numeric, integrate_pdf, pdf_integral,
                         quantile_numeric, sf_numeric)
from .asymptotics import (AsymptoticApprox, Side, Tail, coeff_c, coeff_c_product_normal,
                          coeff_d, coeff_d_product_normal, coeff_delta, coeff_gamma,
                          pdf_asymptotic, pdf_asymptotic_product_normal,
                          pdf_asymptotic_product_normal_generic, quantile_asymptotic,
                          tail_asymptotic)
from .montecarlo import (InsufficientSamplesError, McConfig, McEstimate, mc_quantile,
                         mc_quantiles, mc_tail, sample_ncg, sample_pair)
from .tables import TableReport, TableSpec, export_report, run_table, table_spec

__version__ = "0.1.0"
