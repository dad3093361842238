__all__ = ['main', 'build_parser', 'EXIT_OK', 'EXIT_IO', 'EXIT_VALIDATION', 'EXIT_USAGE']

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn

import placerank
from placerank import resources, generators, eval as evaluation


logger = logging.getLogger(__name__)

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_USAGE = 0, 1, 2, 64
SEED_ENV = 'STPE_SEED'


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read_json(path: str | Path) -> Dict[str, Any]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as exc:
        raise placerank.FormatError(str(path), f'invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}')

    if not isinstance(data, dict):
        raise placerank.FormatError(str(path), 'top level must be a JSON object')
    return data


def _env_seed() -> int | None:
    value = os.environ.get(SEED_ENV)
    if value is None or value == '':
        return None
    try:
        return int(value)
    except ValueError:
        raise placerank.ValidationError([{'name': SEED_ENV, 'message': 'Value must be an integer.'}])


def _run_configs(args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    """STPE and PF config with precedence --set > --config file > defaults."""
    configs: Dict[str, Any] = {'stpe': {}, 'pf': {}}

    if args.config:
        data = _read_json(args.config)
        if set(data) <= {'stpe', 'pf'}:
            configs = resources.merge_dicts(configs, data)
        else:
            configs['stpe'] = data

    assignments = [expr if '.' in expr.split('=', 1)[0] else f'stpe.{expr}' for expr in args.set or []]
    return resources.apply_overrides(configs, assignments)


def cmd_gen(args: argparse.Namespace) -> int:
    config = _read_json(args.spec)
    seed = _env_seed()
    if seed is not None:
        config['seed'] = seed

    spec = generators.WorldSpec.from_config(config)
    scenario = generators.generate_scenario(spec)
    paths = generators.write_scenario(scenario, args.out)

    for path in paths.values():
        print(path)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    configs = _run_configs(args)
    noise_config = _read_json(args.noise) if args.noise else {}

    seed = _env_seed()
    if seed is not None:
        noise_config['seed'] = seed
        configs['pf']['seed'] = seed

    noise = resources.NoiseSpec.from_config(noise_config)
    client = placerank.Placerank.from_file(args.db, stpe_config=configs['stpe'], pf_config=configs['pf'])
    queries = resources.load_queryseq(args.queries)

    for frame in queries:
        if frame.descriptor.size != client.index.dimension:
            raise placerank.DimensionMismatch(client.index.dimension, frame.descriptor.size, where=f'query {frame.index}')

    scenario = generators.GeneratedScenario(database=[], queries=queries)
    result = evaluation.run_experiment(
        scenario, method=args.method, noise=noise, deterministic=args.deterministic, client=client
    )

    name = evaluation.report_basename(args.name, args.method, deterministic=args.deterministic)
    evaluation.write_run_report(
        result, args.out, name,
        config={'method': args.method, 'stpe': client.stpe_config, 'pf': client.pf_config, 'noise': noise_config},
    )

    print(json.dumps(result.recall.to_dict() if result.recall is not None else None, sort_keys=True))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _read_json(args.spec)
    seed = _env_seed()
    if seed is not None:
        config['seed'] = seed

    spec = evaluation.SweepSpec.from_config(config)
    scenario = generators.load_scenario(args.scenario)
    table = evaluation.sweep(spec, scenario, jobs=args.jobs, deterministic=args.deterministic)

    name = evaluation.report_basename(spec.name, spec.axis_label, deterministic=args.deterministic)
    paths = evaluation.write_sweep_reports(table, args.out, name)
    if args.report_plot_data:
        evaluation.write_plot_data(table, args.out, name)

    print(paths['csv'])
    return EXIT_OK


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='placerank', description='Sequential place recognition over submap databases.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug logging')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

    gen = commands.add_parser('gen', help='generate a synthetic scenario')
    gen.add_argument('spec', help='world spec JSON file')
    gen.add_argument('out', help='output directory')
    gen.set_defaults(handler=cmd_gen)

    run = commands.add_parser('run', help='run one method over a query sequence')
    run.add_argument('db', help='submap database (JSON-Lines or binary)')
    run.add_argument('queries', help='query sequence (JSON-Lines)')
    run.add_argument('--method', choices=['single', 'stpe', 'pf'], default='stpe')
    run.add_argument('--config', help='JSON config file ({"stpe": {...}, "pf": {...}} or bare STPE keys)')
    run.add_argument('--noise', help='JSON odometry noise file')
    run.add_argument('--set', action='append', metavar='KEY=VALUE', help='config override, e.g. k_particles=20')
    run.add_argument('--out', required=True, help='output directory')
    run.add_argument('--name', default='run', help='report name prefix')
    run.add_argument('--deterministic', action='store_true', help='pin report names and zero timings')
    run.set_defaults(handler=cmd_run)

    sweep = commands.add_parser('sweep', help='run a parameter sweep')
    sweep.add_argument('spec', help='sweep spec JSON file')
    sweep.add_argument('scenario', help='scenario directory written by gen')
    sweep.add_argument('--out', required=True, help='output directory')
    sweep.add_argument('--jobs', type=int, default=1, help='worker processes')
    sweep.add_argument('--deterministic', action='store_true', help='pin report names and zero timings')
    sweep.add_argument('--report-plot-data', action='store_true', help='also write recall-vs-axis series files')
    sweep.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: List[str] | None = None) -> int:
    """
    Command-line entry point.

    :param argv: Arguments (defaults to sys.argv).
    :return: Exit code: 0 success, 1 I/O, 2 validation, 64 usage.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f'placerank: error: {exc}\n')
        return EXIT_USAGE

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        return args.handler(args)
    except (placerank.FormatError, OSError) as exc:
        sys.stderr.write(f'placerank: {exc}\n')
        return EXIT_IO
    except placerank.PlacerankError as exc:
        sys.stderr.write(f'placerank: {exc}\n')
        return EXIT_VALIDATION
