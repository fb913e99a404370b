import argparse
from dataclasses import replace
from typing import List, Optional

import yaml

from farey_ppsl2.entity import ConfigError, RunConfig
from farey_ppsl2.infra import emit  # noqa: F401
from farey_ppsl2.infra.init_storage import load_config
from farey_ppsl2.infra.suite import registered

COMMAND_HELP = {
    'verify': 'run an exact or numeric verification suite',
    'fourier': 'emit Fourier coefficients against the quadrature oracle',
    'enumerate': 'list the Farey enumeration',
    'coset': 'classify words in the commutator quotient',
    'tess': 'build the canonically decorated Farey tessellation',
    'expand': 'expand a field in the hyperfan basis',
}


def _add_flags(parser: argparse.ArgumentParser):
    # 未给出的参数不出现在命名空间里，以便覆盖 YAML 中的值
    suppress = argparse.SUPPRESS
    parser.add_argument('--max-gen', dest='max_gen', type=int, default=suppress, help='generation bound G')
    parser.add_argument('--max-polygon', dest='max_polygon', type=int, default=suppress,
                        help='largest polygon size n for verify polygon-relations')
    parser.add_argument('--samples', type=int, default=suppress, help='number of seeded samples')
    parser.add_argument('--seed', type=int, default=suppress, help='seed of randomized suites')
    parser.add_argument('--case', default=suppress, help='doe position: doe, I, II, III, IV or all')
    parser.add_argument('--word', default=suppress, help='word in U, T, S, R and their inverses')
    parser.add_argument('--terms', default=suppress, help='hyperfan combination "coef:word,..."')
    parser.add_argument('--nmax', type=int, default=suppress, help='largest Fourier mode')
    parser.add_argument('--truncation', type=int, default=suppress, help='partial sum or q-series length N')
    parser.add_argument('--kk-truncation', dest='kk_truncation', type=int, default=suppress,
                        help='Kirillov-Kostant truncation M')
    parser.add_argument('--step', type=float, default=suppress, help='finite difference step h')
    parser.add_argument('--out', default=suppress, help='report path; bare names go to the report directory')
    parser.add_argument('--format', dest='fmt', choices=('json', 'csv'), default=suppress,
                        help='report format; defaults to the --out suffix, else json')
    parser.add_argument('--config', default=suppress, help='YAML file holding a RunConfig')
    parser.add_argument('--save-config', dest='save_config', default=suppress,
                        help='write the effective configuration as YAML')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='farey-ppsl2',
                                     description='Exact PPSL2(Z) and ppsl2 verification suites.')
    commands = parser.add_subparsers(dest='command', required=True)
    for command, description in COMMAND_HELP.items():
        sub = commands.add_parser(command, help=description)
        sub.add_argument('target', choices=[target for _, target in registered(command)])
        _add_flags(sub)
    return parser


def config_from_args(argv: Optional[List[str]] = None) -> RunConfig:
    """YAML 作底，命令行参数覆盖"""
    namespace = vars(build_parser().parse_args(argv))
    path = namespace.get('config')
    try:
        config = load_config(path) if path else RunConfig()
    except (OSError, ValueError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read configuration '{path}': {e}") from e
    config = replace(config, **namespace)
    if config.fmt is None:
        # 未指定 --format 时按 --out 的后缀决定
        config = replace(config, fmt='csv' if (config.out or '').lower().endswith('.csv') else 'json')
    if config.fmt not in ('json', 'csv'):
        raise ConfigError(f"unknown report format '{config.fmt}', expected json or csv")
    return config
