#pylint: disable=wrong-import-position,wrong-import-order,superfluous-parens
import os
import argparse
import json
import logging
import sys
import tqdm
import sasaki.checks
import sasaki.exceptions
import sasaki.report
import sasaki.tensor
import sasaki.zoo

#: Version of the machine-readable report layout
SCHEMA = 'sasaki-report/1'

_parser = argparse.ArgumentParser(prog='sasaki')
_parser.add_argument('--log-level')
_subparsers = _parser.add_subparsers(dest='op')
_run = _subparsers.add_parser('run')
_run.add_argument('--model')
_run.add_argument('--checks')
_run.add_argument('--seed', type=int)
_run.add_argument('--tol', type=float)
_run.add_argument('--points', type=int)
_run.add_argument('--format', choices=['text', 'json'])
_run.add_argument('--out')
_list = _subparsers.add_parser('list')
_list.add_argument('--format', choices=['text', 'json'])

def _env(environ, name, default, convert=str):
    value = environ.get(name)
    if value is None or value == '':
        return default
    try:
        return convert(value)
    except ValueError:
        _parser.error('invalid %s: %r' % (name, value))

def _config(args, environ):
    config = {
        'model': args.model or _env(environ, 'SASAKI_MODEL', None),
        'checks': args.checks or _env(environ, 'SASAKI_CHECKS', 'all'),
        'seed': args.seed if args.seed is not None else
                _env(environ, 'SASAKI_SEED', sasaki.checks.DEFAULT_SEED, int),
        'tol': args.tol if args.tol is not None else
               _env(environ, 'SASAKI_TOL', sasaki.tensor.DEFAULT_TOL, float),
        'points': args.points if args.points is not None else
                  _env(environ, 'SASAKI_POINTS', sasaki.checks.DEFAULT_POINTS, int),
        'format': args.format or _env(environ, 'SASAKI_FORMAT', 'text'),
        'out': args.out,
    }
    if config['model'] is None:
        _parser.error('no model given (--model or SASAKI_MODEL)')
    if config['format'] not in ('text', 'json'):
        _parser.error('invalid format: %s' % config['format'])
    if config['seed'] < 0:
        _parser.error('seed must be unsigned')
    if config['points'] < 1:
        _parser.error('points must be positive')
    if config['tol'] <= 0:
        _parser.error('tolerance must be positive')
    # reject unknown ids before any computation
    if not sasaki.zoo.is_model_id(config['model']):
        _parser.error('unknown model: %s' % config['model'])
    try:
        config['checks'] = sasaki.checks.resolve_checks(config['checks'])
    except sasaki.exceptions.UnknownCheckError as ex:
        _parser.error(str(ex))
    return config

def _format_text(reports):
    lines = []
    for report in reports:
        worst = max(report.residuals.values()) if report.residuals else 0.0
        lines.append('%-8s %-30s %s (%d points, max residual %.3g)' % (
            report.status.upper(), report.check_id, report.model_id, report.points, worst))
        for name in report.failures():
            lines.append('    failed: %s = %.3g (tolerance %g)' % (
                name, report.residuals[name], report.tolerance_for(name)))
        for note in report.notes:
            lines.append('    note: %s' % note)
        if report.error is not None:
            lines.append('    error: %s at %s' % (report.error, report.error_point))
    return os.linesep.join(lines) + os.linesep

def _format_json(config, reports):
    doc = {
        'schema': SCHEMA,
        'config': config,
        'reports': [r.to_dict() for r in reports],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + '\n'

def list_models_and_checks():
    """
    :rtype: dict
    :returns: Model ids with descriptions and the check catalogue with
              anchors, both in listing order
    """
    return {
        'models': [{'model': model_id, 'description': description}
                   for model_id, description in sasaki.zoo.MODEL_IDS.items()],
        'checks': [{'check': c.check_id, 'anchor': c.anchor, 'statement': c.statement}
                   for c in sasaki.checks.CATALOGUE.values()],
    }

def exit_status(reports):
    """0 iff every report that was not skipped passed."""
    for report in reports:
        if report.status in (sasaki.report.FAILED, sasaki.report.ERRORED):
            return 1
    return 0

def doit(args, environ):
    args = _parser.parse_args(args)

    level = args.log_level or environ.get('SASAKI_LOG_LEVEL') or 'WARNING'
    logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING),
                        stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')

    sasaki_progress = environ.get('SASAKI_PROGRESS')
    if sasaki_progress == '1' or (sasaki_progress != '0' and sys.stderr.isatty()):
        bars = {}
        def progress(check_id, done, total):
            if check_id not in bars:
                bars[check_id] = tqdm.tqdm(desc=check_id,
                                           total=total,
                                           leave=True)
            bars[check_id].update(done - bars[check_id].n)
            if bars[check_id].n >= bars[check_id].total:
                bars[check_id].close()
                del bars[check_id]
    else:
        progress = None

    if args.op == 'list':
        listing = list_models_and_checks()
        if (args.format or environ.get('SASAKI_FORMAT')) == 'json':
            listing['schema'] = SCHEMA
            sys.stdout.write(json.dumps(listing, sort_keys=True, indent=2) + '\n')
            return 0
        for model in listing['models']:
            print('model  %-28s %s' % (model['model'], model['description']))
        for check in listing['checks']:
            print('check  %-28s [%s] %s' % (check['check'], check['anchor'],
                                              check['statement']))
        return 0

    if args.op != 'run':
        _parser.error('expected a subcommand: run or list')

    config = _config(args, environ)
    reports = sasaki.checks.run_checks(config['model'], config['checks'],
                                       seed=config['seed'], tol=config['tol'],
                                       count=config['points'], progress=progress)
    if config['format'] == 'json':
        out = _format_json(config, reports)
    else:
        out = _format_text(reports)
    if config['out']:
        with open(config['out'], 'w') as f:
            f.write(out)
    else:
        sys.stdout.write(out)
    return exit_status(reports)

def main():
    exit(doit(sys.argv[1:], os.environ))
