"""
Application controller coordinating the command line and services.
"""

import logging
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence, TextIO

from src.config import CliConfig
from src.services.canonical import canonical_expansion, e_omega, expansion_from_element, verify_canonical
from src.services.counting import HallCounter
from src.services.exceptions import (
    CeilingExceeded,
    ConfigError,
    ConsistencyError,
    InfeasibleInput,
    VocicError,
)
from src.services.hall import HallAlgebra
from src.services.hall_cache import HallCache, validate_cache_file
from src.services.ic import component_report, stalk_table
from src.services.repquiver import component_for, enumerate_orbits
from src.services.verification import SUITES, VerificationService, VerifyBounds
from src.utils.export import ResultExporter
from src.utils.parsing import parse_dim, parse_multisegment, parse_ranks

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFICATION = 3
EXIT_CONSISTENCY = 4


def exit_code_for(error: Exception) -> int:
    """Exit status for an error escaping a command."""
    if isinstance(error, ConsistencyError):
        return EXIT_CONSISTENCY
    if isinstance(error, InfeasibleInput):
        return EXIT_INFEASIBLE
    return EXIT_USAGE


class AppController:
    """Runs one subcommand: parses its arguments, calls the services, writes the result."""

    def __init__(self, config: CliConfig, out: TextIO = None):
        self.config = config
        self.out = out if out is not None else sys.stdout
        self.exporter = ResultExporter(config.format)
        self.cache = HallCache(config.cache_path)
        self.counter = HallCounter(self.cache, threads=config.thread_count, extra_primes=config.extra_primes)
        self._algebras: Dict[int, HallAlgebra] = {}

    def algebra(self, n: int) -> HallAlgebra:
        if n not in self._algebras:
            self._algebras[n] = HallAlgebra(n, self.counter)
        return self._algebras[n]

    def check_ceiling(self, total: int, what: str):
        """Hall-based commands refuse weights above max_total_dim."""
        if total > self.config.max_total_dim:
            raise CeilingExceeded(
                f"{what} has total dimension {total}, above the ceiling {self.config.max_total_dim}"
                f" (raise it with --max-total-dim)"
            )

    def emit(self, text: str):
        self.out.write(text)

    def close(self):
        """Write newly computed Hall polynomials back to the cache file."""
        self.cache.flush()

    # Component geometry

    def cmd_components(self, dim: str) -> int:
        d = parse_dim(dim)
        self.emit(self.exporter.render_components(d, component_report(d)))
        return EXIT_OK

    def cmd_stalks(self, dim: str, r: Optional[str] = None) -> int:
        """Stalk table of one component, or of every component when r is omitted."""
        d = parse_dim(dim)
        if r is None:
            tables = component_report(d)
        else:
            tables = [stalk_table(component_for(d, parse_ranks(r, len(d))))]
        self.emit(self.exporter.render_stalks(tables))
        return EXIT_OK

    def cmd_orbits(self, dim: str) -> int:
        d = parse_dim(dim)
        self.emit(self.exporter.render_orbits(d, enumerate_orbits(d)))
        return EXIT_OK

    # Hall algebra

    def cmd_canonical(self, dim: str, r: str, method: str = "hall", check: bool = False) -> int:
        """
        Expansion of E_Omega(r, h) at the degenerations M(r - k, h dotplus k).

        Args:
            dim: Dimension vector text
            r: Rank vector text
            method: "hall" multiplies the element out, "closed" uses the closed form
            check: Also run the canonical-basis checks; a failure gives exit 3
        """
        d = parse_dim(dim)
        c = component_for(d, parse_ranks(r, len(d)))
        if method == "closed" and not check:
            self.emit(self.exporter.render_canonical(c, canonical_expansion(c)))
            return EXIT_OK

        self.check_ceiling(sum(d), f"Com({','.join(map(str, d))})")
        algebra = self.algebra(c.n)
        element = e_omega(c, algebra)
        expansion = expansion_from_element(c, element) if method == "hall" else canonical_expansion(c)
        self.emit(self.exporter.render_canonical(c, expansion))
        if check:
            report = verify_canonical(c, algebra, element)
            for failure in report.failures:
                LOGGER.error(f"{failure.name}: {failure.detail}")
            return EXIT_OK if report.passed else EXIT_VERIFICATION
        return EXIT_OK

    def cmd_hall(self, lhs: str, rhs: str, n: Optional[int] = None) -> int:
        """E_lhs * E_rhs; n defaults to the largest right end appearing in either factor."""
        if n is None:
            n = max(parse_multisegment(lhs).n, parse_multisegment(rhs).n)
        M, N = parse_multisegment(lhs, n), parse_multisegment(rhs, n)
        self.check_ceiling(M.total_dim + N.total_dim, f"{M} * {N}")
        product = self.algebra(n).basis_product(M, N)
        self.emit(self.exporter.render_hall(M, N, product))
        return EXIT_OK

    def cmd_basis(self, dim: str) -> int:
        d = parse_dim(dim)
        self.check_ceiling(sum(d), f"Weight {d}")
        basis = self.algebra(len(d)).triangular_canonical_basis(d)
        self.emit(self.exporter.render_basis(d, basis))
        return EXIT_OK

    # Verification and cache maintenance

    def cmd_verify(
        self,
        suites: Optional[Sequence[str]] = None,
        max_rank: int = 4,
        max_entry: Optional[int] = None,
    ) -> int:
        suites = list(suites) if suites else list(SUITES)
        unknown = [name for name in suites if name not in SUITES]
        if unknown:
            raise ConfigError(f"Unknown suite(s) {unknown}; choose from {list(SUITES)}")
        suites = [name for name in SUITES if name in suites]
        bounds = VerifyBounds(max_rank=max_rank, max_entry=max_entry, max_total_dim=self.config.max_total_dim)
        service = VerificationService(
            cache=self.cache,
            threads=self.config.thread_count,
            extra_primes=self.config.extra_primes,
        )
        report = service.run(suites, bounds)
        self.emit(self.exporter.render_report(report))
        LOGGER.info(f"Verification: {len(report.checks)} checks, {len(report.failures)} failed")
        return EXIT_OK if report.passed else EXIT_VERIFICATION

    def cmd_cache_validate(self, path: Optional[str] = None) -> int:
        target = Path(path).expanduser() if path else self.config.cache_path
        if target is None:
            raise ConfigError("No cache file given: pass a path, --cache, or set VOCIC_CACHE")
        if not target.exists():
            raise ConfigError(f"Cache file {target} does not exist")
        entries = validate_cache_file(target)
        self.emit(self.exporter.render_cache_validation(target, entries))
        return EXIT_OK


def run_command(controller: AppController, command: str, **kwargs) -> int:
    """Dispatch to cmd_<command>, translating domain errors into exit codes."""
    handler = getattr(controller, f"cmd_{command}")
    try:
        return handler(**kwargs)
    except VocicError as e:
        LOGGER.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)
    finally:
        controller.close()
