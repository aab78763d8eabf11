import functools
import logging
import os
import shutil
import sys
from typing import Any, Dict, List

import click

from reliefscan.app import create_app, segmenters
from reliefscan.evaluation.experiment import Experiment
from reliefscan.exceptions import BaseError, FormatError
from reliefscan.hmap_io.manifest import read_manifest
from reliefscan.hmap_io.results import (read_missingness, read_results,
                                        write_missingness, write_results)
from reliefscan.models.enums import REGIME_ORDER, Regime
from reliefscan.models.results import ResultTable
from reliefscan.report.boxplot import render_boxplot
from reliefscan.report.markdown import render_markdown
from reliefscan.stats.report import (STATS_JSON, analyze, read_stats,
                                     write_stats)
from reliefscan.synth import SynthConfig, generate_corpus
from reliefscan.synth.corpus import MANIFEST_NAME
from reliefscan.utils.config import resolve_path
from reliefscan.utils.format import custom_json_dumps
from reliefscan.utils.hooks import regime_complete_hook
from reliefscan.utils.logging import run_context
from reliefscan.version import __version__

LOG = logging.getLogger('reliefscan.commands')

CONFIG_ECHO = 'config.echo'
PROVENANCE = 'provenance.json'
MISSINGNESS_CSV = 'missingness.csv'
BOXPLOT_SVG = 'boxplot.svg'
REPORT_MD = 'report.md'


def results_name(regime: Regime) -> str:
    return 'results_{}.csv'.format(Regime(regime).value)


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise click.BadParameter('expected comma-separated integers, got {!r}'.format(value))


def _regime_list(ctx, param, value):
    if value is None:
        return None
    regimes = [v.strip() for v in value.split(',') if v.strip()]
    unknown = [r for r in regimes if r not in [x.value for x in REGIME_ORDER]]
    if unknown:
        raise click.BadParameter('unknown regimes: {}'.format(', '.join(unknown)))
    return regimes


def common_options(f):
    f = click.option('--out', help='Output directory (overrides OUTPUT_DIR)')(f)
    f = click.option('--seed', type=int, help='Experiment seed (overrides SEED)')(f)
    f = click.option('--config', 'config_file', type=click.Path(dir_okay=False), help='Run config file')(f)
    return f


def handle_errors(f):
    """Report typed failures as 'ERROR: ...' and exit with their code."""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except BaseError as e:
            LOG.error(e.message)
            click.echo('ERROR: {}'.format(e.message), err=True)
            sys.exit(e.code)
        except OSError as e:
            LOG.error(str(e))
            click.echo('ERROR: {}'.format(e), err=True)
            sys.exit(1)
        except Exception as e:
            LOG.exception(e)
            click.echo('ERROR: {}'.format(e), err=True)
            sys.exit(1)
    return wrapper


def load_config(config_file: str = None, seed: int = None, out: str = None, **overrides) -> Dict[str, Any]:
    override = {k.upper(): v for k, v in overrides.items() if v is not None}
    if seed is not None:
        override['SEED'] = seed
    if out:
        override['OUTPUT_DIR'] = resolve_path(out, os.getcwd())
    return create_app(override, config_file)


def write_provenance(config: Dict[str, Any], command: str) -> List[str]:
    """Copy the run config verbatim and record the resolved settings next to the outputs."""
    out_dir = config['OUTPUT_DIR']
    os.makedirs(out_dir, exist_ok=True)
    echo = os.path.join(out_dir, CONFIG_ECHO)
    if config.get('CONFIG_FILE'):
        shutil.copyfile(config['CONFIG_FILE'], echo)
    else:
        with open(echo, 'w', encoding='utf-8', newline='\n') as f:
            f.write('# no run config file; defaults and overrides in {}\n'.format(PROVENANCE))

    provenance = os.path.join(out_dir, PROVENANCE)
    settings = {k: v for k, v in config.items() if k.isupper()}
    with open(provenance, 'w', encoding='utf-8', newline='\n') as f:
        f.write(custom_json_dumps({'command': command, 'version': __version__, 'settings': settings}) + '\n')
    return [echo, provenance]


@click.group()
@click.version_option(version=__version__)
def cli():
    """
    Topographic ink detection experiments on papyrus heightmaps.
    """


@cli.command('synth', short_help='Generate the synthetic corpus')
@common_options
@handle_errors
def synth(config_file, seed, out):
    """
    Write synthetic heightmaps, ink labels and a manifest.
    """
    config = load_config(config_file, seed)
    out_dir = resolve_path(out, os.getcwd()) if out else config['SYNTH_DIR']

    params = dict(
        width=config['SYNTH_WIDTH'],
        height=config['SYNTH_HEIGHT'],
        pitch_um=config['NATIVE_PITCH_UM'],
        dropout_frac=config['SYNTH_DROPOUT_FRAC']
    )
    params.update(config['SYNTH_PARAMS'])
    base = SynthConfig(seed=config['SEED'], **params)
    papyri = {p: config['SYNTH_PAPYRUS_OFFSETS'].get(p, {}) for p in config['SYNTH_PAPYRI']}
    manifest = generate_corpus(base, config['SYNTH_SAMPLES_PER_PAPYRUS'], papyri, out_dir)

    for papyrus, members in manifest.by_papyrus().items():
        click.echo('{:10} {} samples'.format(papyrus, len(members)), err=True)
    for sample in manifest:
        click.echo(sample.heightmap_path)
        click.echo(sample.label_path)
    click.echo(os.path.join(out_dir, MANIFEST_NAME))


@cli.command('run', short_help='Run experimental regimes')
@common_options
@click.option('--regimes', callback=_regime_list, help='Comma-separated regimes, eg. matched,cross_res')
@click.option('--ladder', callback=_int_list, help='Comma-separated block kernel sizes, eg. 1,2,4')
@handle_errors
def run(config_file, seed, out, regimes, ladder):
    """
    Train and score segmenters, writing one result CSV per regime.
    """
    config = load_config(config_file, seed, out, regimes=regimes, ladder=ladder)
    manifest = read_manifest(config['MANIFEST'])
    out_dir = config['OUTPUT_DIR']

    def progress(sender, **kwargs):
        click.echo('{:10} {} rows'.format(sender, kwargs.get('rows')), err=True)

    experiment = Experiment.from_config(manifest, config, segmenter=segmenters.get(config['SEGMENTER']))
    paths = write_provenance(config, 'run')
    with regime_complete_hook.connected_to(progress):
        for name in config['REGIMES']:
            regime = Regime(name)
            with run_context(run_id='{}-{}'.format(config['SEED'], regime.value)):
                table = experiment.run(regime)
            path = os.path.join(out_dir, results_name(regime))
            write_results(table, path)
            paths.append(path)

    path = os.path.join(out_dir, MISSINGNESS_CSV)
    write_missingness(experiment.missingness(), path)
    paths.append(path)

    for path in paths:
        click.echo(path)


def _load_tables(out_dir: str) -> Dict[Regime, ResultTable]:
    tables = {}
    for regime in REGIME_ORDER:
        path = os.path.join(out_dir, results_name(regime))
        if os.path.isfile(path):
            tables[regime] = read_results(path)
    if not tables:
        raise FormatError('no result tables found; expected {}'.format(
            os.path.join(out_dir, results_name(Regime.Matched))))
    return tables


@cli.command('stats', short_help='Compute statistics over result tables')
@common_options
@handle_errors
def stats(config_file, seed, out):
    """
    Friedman, Page's L and Holm-corrected Wilcoxon contrasts per regime,
    with per-pitch summaries, LOPO and missingness reports.
    """
    config = load_config(config_file, seed, out)
    out_dir = config['OUTPUT_DIR']
    tables = _load_tables(out_dir)

    missingness_path = os.path.join(out_dir, MISSINGNESS_CSV)
    missingness = read_missingness(missingness_path) if os.path.isfile(missingness_path) else None
    papyri = list(config['SYNTH_PAPYRI'])

    analysis = analyze(
        tables,
        missingness=missingness,
        papyri=papyri,
        n_perm=config['N_PERM'],
        seed=config['SEED'],
        alpha=config['ALPHA'],
        reference=config['DICE_REFERENCE']
    )
    for path in write_stats(analysis, out_dir):
        click.echo(path)


@cli.command('report', short_help='Draw box plots and a markdown summary')
@common_options
@handle_errors
def report(config_file, seed, out):
    """
    Grouped box plot of matched and cross-resolution Dice per pitch, plus a
    markdown summary of the statistics.
    """
    config = load_config(config_file, seed, out)
    out_dir = config['OUTPUT_DIR']
    analysis = read_stats(os.path.join(out_dir, STATS_JSON))

    tables = _load_tables(out_dir)
    merged = ResultTable()
    for t in tables.values():
        merged.extend(t)

    svg_path = os.path.join(out_dir, BOXPLOT_SVG)
    with open(svg_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(render_boxplot(merged, reference=config['DICE_REFERENCE']))

    md_path = os.path.join(out_dir, REPORT_MD)
    with open(md_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(render_markdown(analysis, artifacts=[BOXPLOT_SVG, STATS_JSON]))

    click.echo(svg_path)
    click.echo(md_path)
