#!/usr/bin/env python3
"""
Fixture Validation Script
Runs every ideal file in the fixture corpus and checks its assertions
"""

import sys
import logging
from pathlib import Path
from typing import List, Optional, Tuple

from config import config
from construct import differential_matroid, frobenius_flock_shift, implicitize
from errors import AlgMatError
from groebner import IdealPresentation, elimination_ideal, ideal_equal
from ideal_file import IdealFile, load_ideal_file
from matroid import Matroid, algebraic_matroid, check_axioms, circuits

logger = logging.getLogger(__name__)

Outcome = Tuple[str, bool, str]


class Validator:
    """Fixture validation checks"""

    def __init__(self, quiet: bool = False):
        self.checks_passed = 0
        self.checks_failed = 0
        self.warnings = 0
        self.quiet = quiet

    def _print(self, text: str):
        if not self.quiet:
            print(text)

    def check(self, name: str, condition: bool, error_msg: str = "", warning: bool = False):
        """Run a validation check"""
        if condition:
            self._print(f"✅ {name}")
            self.checks_passed += 1
        else:
            if warning:
                self._print(f"⚠️  {name}: {error_msg}")
                self.warnings += 1
            else:
                self._print(f"❌ {name}: {error_msg}")
                self.checks_failed += 1

    def print_summary(self):
        """Print validation summary"""
        total = self.checks_passed + self.checks_failed

        print("\n" + "=" * 60)
        print("VALIDATION SUMMARY")
        print("=" * 60)
        print(f"✅ Passed: {self.checks_passed}/{total}")

        if self.checks_failed > 0:
            print(f"❌ Failed: {self.checks_failed}/{total}")

        if self.warnings > 0:
            print(f"⚠️  Warnings: {self.warnings}")

        if self.checks_failed == 0:
            print("\n🎉 Every fixture passes its assertions")
        else:
            print("\n⚠️  Some fixtures disagree with their assertions")

        print("=" * 60)


def produced_ideal(f: IdealFile) -> IdealPresentation:
    """The ideal the file's default command produces"""
    command = f.default
    if command == "eliminate":
        return elimination_ideal(f.ideal(), f.keep or f.vars)
    if command == "implicitize":
        return implicitize(f.parameterization())
    if command == "flock":
        a, b = f.shift
        return frobenius_flock_shift(f.ideal(), a, b)
    return f.ideal()


def produced_matroid(f: IdealFile, ideal: Optional[IdealPresentation] = None) -> Matroid:
    """Algebraic matroid, except for differential commands"""
    ideal = ideal or produced_ideal(f)
    if f.default in ("diff-matroid", "jacobian", "flock"):
        return differential_matroid(ideal).diff_matroid
    return algebraic_matroid(ideal)


def check_fixture(f: IdealFile) -> List[Outcome]:
    """Evaluate every assertion of one file; returns (name, passed, detail) triples"""
    outcomes: List[Outcome] = []
    ideal = produced_ideal(f)
    needs_matroid = any(a.kind != "equal" for a in f.assertions)
    M = produced_matroid(f, ideal) if needs_matroid else None

    for assertion in f.assertions:
        kind, args = assertion.kind, assertion.args
        name = str(assertion)
        if kind == "rank":
            outcomes.append((name, M.rank == int(args[0]), f"rank is {M.rank}"))
        elif kind == "bases":
            outcomes.append((name, len(M.bases) == int(args[0]), f"{len(M.bases)} bases"))
        elif kind == "circuits":
            count = len(circuits(M))
            outcomes.append((name, count == int(args[0]), f"{count} circuits"))
        elif kind == "independent":
            outcomes.append((name, M.is_independent(args), "dependent"))
        elif kind == "dependent":
            outcomes.append((name, not M.is_independent(args), "independent"))
        elif kind == "loops":
            loops = [M.labels[i] for i in M.loops()]
            expected = [] if args == ("none",) else list(args)
            outcomes.append((name, sorted(loops) == sorted(expected), f"loops are {loops or 'none'}"))
        elif kind == "equal":
            other = load_ideal_file(f.resolve(args[0])).ideal()
            outcomes.append((name, ideal_equal(ideal, other), "ideals differ"))

    if M is not None:
        outcomes.append(("matroid axioms", check_axioms(M), "basis exchange fails"))
    return outcomes


def fixture_paths(root: Optional[Path] = None) -> List[Path]:
    root = Path(root or config.run.fixtures_path)
    return sorted(root.glob("*.ideal"))


def validate_fixtures(validator: Validator, root: Optional[Path] = None):
    """Parse and run every fixture"""
    for path in fixture_paths(root):
        validator._print(f"\n📄 {path.name}")
        validator._print("-" * 60)
        try:
            f = load_ideal_file(path)
            validator.check("parses", True)
            for name, passed, detail in check_fixture(f):
                validator.check(name, passed, detail)
        except AlgMatError as e:
            logger.error(f"{path.name}: {e}", exc_info=True)
            validator.check("runs", False, f"{type(e).__name__}: {e}")


def main():
    """Main validation flow"""
    print("""
╔═══════════════════════════════════════════════════════════╗
║          algmat Fixture Validation                        ║
╚═══════════════════════════════════════════════════════════╝
""")
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=config.run.log_level
    )
    validator = Validator()
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else None

    try:
        validate_fixtures(validator, root)
        validator.print_summary()
    except KeyboardInterrupt:
        print("\n\nValidation cancelled")
        sys.exit(1)

    if validator.checks_failed:
        sys.exit(1)


if __name__ == '__main__':
    main()
