"""
Shared plumbing for the gate management commands.

Exit status:
    0  success
    1  verification failure or an output file that cannot be written
    2  invalid options (argparse usage errors exit with 2 on their own)
"""

from pathlib import Path
from typing import Callable, Dict, Iterable, Optional, TypeVar

from django.core.management.base import CommandError

from gates.services.errors import GateServiceError

USAGE_ERROR = 2
FAILURE = 1

T = TypeVar('T')


def add_range_arguments(parser, points_flag: str, points_help: str) -> None:
    parser.add_argument(
        '--range',
        nargs=2,
        type=float,
        metavar=('KAPPA_MIN', 'KAPPA_MAX'),
        dest='kappa_range',
        help='Kappa interval (default -10 10)',
    )
    parser.add_argument(points_flag, type=int, help=points_help)
    parser.add_argument('--input-lead', choices=['A', 'B'], help='Lead carrying the input electron (default A)')
    parser.add_argument('--precision', type=int, help='Decimal digits in the output (default 12)')


def collect(options: Dict, names: Iterable[str]) -> Dict:
    """Options that were actually given, keyed for the serializers."""
    data = {name: options[name] for name in names if options.get(name) is not None}
    kappa_range = options.get('kappa_range')
    if kappa_range is not None:
        data['kappa_min'], data['kappa_max'] = kappa_range
    return data


def validated(serializer_class, data: Dict, context: Optional[Dict] = None) -> Dict:
    serializer = serializer_class(data=data, context=context or {})
    if not serializer.is_valid():
        problems = '; '.join(
            f"{field}: {' '.join(str(message) for message in messages)}"
            for field, messages in serializer.errors.items()
        )
        raise CommandError(f"Invalid options: {problems}", returncode=USAGE_ERROR)
    return serializer.validated_data


def run_service(action: str, call: Callable[[], T]) -> T:
    try:
        return call()
    except GateServiceError as e:
        raise CommandError(f"{action} failed: {e}", returncode=USAGE_ERROR)


def write_file(path: str, writer: Callable[[Path], T]) -> T:
    try:
        return writer(Path(path))
    except OSError as e:
        raise CommandError(f"Cannot write {path}: {e}", returncode=FAILURE)
