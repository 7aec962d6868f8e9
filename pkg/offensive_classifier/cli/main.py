"""command-line interface for offensive-classifier."""

import functools
import logging
import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import click
from rich.console import Console
from rich.markup import escape
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from .. import __version__
from ..core.classifier import CONFIG_FILE, TextClassifier, train_text_classifier
from ..core.config import (
    ModelKind,
    RunConfig,
    SkipgramConfig,
    get_config,
    load_run_config,
)
from ..core.errors import ConfigError, OffensiveClassifierError, ValidationError
from ..core.logging import configure_logging
from ..core.pipeline import load_resources
from ..data.documents import LabeledDocument, Task, labeled_for, labels_for
from ..data.sampling import SamplingMode
from ..data.splitting import stratified_split
from ..data.stats import corpus_statistics, statistics_tsv
from ..data.synthetic import SyntheticConfig, generate_corpus
from ..evaluation.ablation import VARIANTS, AblationGrid, run_ablation
from ..evaluation.agreement import AgreementReport, cohen_kappa, fleiss_kappa
from ..evaluation.metrics import macro_f1
from ..evaluation.reports import (
    ablation_table,
    agreement_table,
    confusion_table,
    eval_table,
    probability_rows,
    statistics_tables,
    write_ablation_report,
    write_eval_report,
)
from ..features.combine import combine_embeddings
from ..features.embeddings import coverage, read_embedding, write_embedding
from ..features.skipgram import train_skipgram
from ..models.ensemble import (
    EnsembleFile,
    EnsembleMemberEntry,
    EnsembleSpec,
    read_ensemble_file,
    soft_vote_batch,
)
from ..models.io import dumps_json
from ..parsers.corpus_parser import (
    format_predictions,
    read_corpus,
    read_predictions,
    read_texts,
    serialize_olid,
    write_text,
)
from ..parsers.ratings_parser import read_rater_labels, read_rating_counts
from ..parsers.resource_parser import resource_path
from ..text.normalizer import VariantDictionary, normalize_text, unnormalized_document

console = Console()
error_console = Console(stderr=True)
logger = logging.getLogger(__name__)

LOCK_FILE = ".offclf.lock"
TASKS = [task.value for task in Task]


def handle_errors(func: Callable[..., Any]) -> Callable[..., Any]:
    """library errors exit with 1, anything unexpected with 2."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except OffensiveClassifierError as e:
            error_console.print("[red]error:[/red]", escape(str(e)))
            sys.exit(1)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except Exception as e:
            logger.debug("unexpected failure", exc_info=True)
            error_console.print("[red]error:[/red]", escape(f"{type(e).__name__}: {e}"))
            sys.exit(2)

    return wrapper


def run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """options shared by every command that builds a run configuration."""
    decorators = [
        click.option(
            '--config',
            'config_file',
            type=click.Path(path_type=Path),
            help='flat key=value config file',
        ),
        click.option(
            '--set',
            'settings',
            multiple=True,
            metavar='KEY=VALUE',
            help='set any config key, e.g. --set forest_trees=300 (repeatable)',
        ),
        click.option(
            '--seed', type=int, help='seed for every random choice (default: 42)'
        ),
        click.option(
            '--jobs', type=click.IntRange(min=1), help='parallel workers (default: 1)'
        ),
        click.option(
            '--no-normalize',
            is_flag=True,
            help='whitespace tokenization only, no text normalization',
        ),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def parse_settings(settings: Sequence[str]) -> Dict[str, str]:
    """`key=value` pairs from --set; keys are config field names, case-insensitive."""
    values: Dict[str, str] = {}
    for setting in settings:
        key, separator, value = setting.partition("=")
        key = key.strip().lower()
        if not separator or not key:
            raise ConfigError(f"--set expects KEY=VALUE, got {setting!r}")
        if key not in RunConfig.model_fields:
            raise ConfigError(f"--set: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def build_config(
    config_file: Optional[Path],
    settings: Sequence[str],
    seed: Optional[int],
    jobs: Optional[int],
    no_normalize: bool,
    **overrides: Any,
) -> RunConfig:
    """config file, then --set pairs, then the named flags on top."""
    values: Dict[str, Any] = parse_settings(settings)
    named = dict(
        overrides, seed=seed, jobs=jobs, normalize=False if no_normalize else None
    )
    values.update({key: value for key, value in named.items() if value is not None})
    config = load_run_config(config_file, **values)
    if config.enable_debug_logging:
        configure_logging(verbose=True, console=error_console)
    return config


@contextmanager
def output_lock(directory: Path) -> Iterator[Path]:
    """refuse to run two invocations against the same output directory."""
    directory.mkdir(parents=True, exist_ok=True)
    lock = directory / LOCK_FILE
    try:
        handle = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise ValidationError(
            f"{directory} is in use by another run (delete {lock} if it is stale)"
        )
    os.close(handle)
    try:
        yield directory
    finally:
        if lock.exists():
            lock.unlink()


def spinner() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=error_console,
    )


def write_effective_config(config: RunConfig, directory: Path) -> Path:
    path = directory / CONFIG_FILE
    write_text(path, dumps_json(config.effective()))
    return path


@click.group()
@click.version_option(version=__version__)
@click.option('--verbose', '-v', is_flag=True, help='debug logging')
def cli(verbose: bool) -> None:
    """offclf: offensive language classification toolkit."""
    configure_logging(verbose=verbose, console=error_console)


@cli.command()
@click.option(
    '--task',
    type=click.Choice(TASKS, case_sensitive=False),
    help='target label column (default: 6-A)'
)
@click.option(
    '--data', 'data_path',
    type=click.Path(path_type=Path),
    help='OLID or internal TSV corpus'
)
@click.option(
    '--out', 'output_directory',
    type=click.Path(path_type=Path),
    help='bundle directory (default: model)'
)
@click.option(
    '--model',
    type=click.Choice([kind.value for kind in ModelKind]),
    help='classifier (default: forest)'
)
@click.option(
    '--lexicon', 'lexicon_path',
    type=click.Path(path_type=Path),
    help='tier<TAB>phrase blacklist'
)
@click.option(
    '--embedding', 'embedding_path',
    type=click.Path(path_type=Path),
    help='word vectors (.vec)'
)
@click.option(
    '--base',
    type=click.Choice(['tfidf', 'embedding', 'both', 'none']),
    help='base vectorization'
)
@click.option(
    '--sampling',
    type=click.Choice([mode.value for mode in SamplingMode]),
    help='class rebalancing'
)
@click.option(
    '--no-features',
    is_flag=True,
    help='drop the graphemic, lexicon and char-LM blocks'
)
@run_options
@handle_errors
def train(
    task: Optional[str],
    data_path: Optional[Path],
    output_directory: Optional[Path],
    model: Optional[str],
    lexicon_path: Optional[Path],
    embedding_path: Optional[Path],
    base: Optional[str],
    sampling: Optional[str],
    no_features: bool,
    config_file: Optional[Path],
    settings: Tuple[str, ...],
    seed: Optional[int],
    jobs: Optional[int],
    no_normalize: bool,
) -> None:
    """train a classifier bundle on a labeled corpus."""
    features = False if no_features else None
    config = build_config(
        config_file,
        settings,
        seed,
        jobs,
        no_normalize,
        task=task,
        data_path=data_path,
        output_directory=output_directory,
        model=model,
        lexicon_path=lexicon_path,
        embedding_path=embedding_path,
        base=base,
        sampling=sampling,
        use_graphemic=features,
        use_lexicon=features,
        use_charlm=features,
    )
    if config.data_path is None:
        raise ValidationError("no training data: pass --data or set data_path")

    with output_lock(config.output_directory) as out:
        documents = read_corpus(config.data_path)
        with spinner() as progress:
            job = progress.add_task(
                f"training {config.model.value} for task {config.task.value}...",
                total=None,
            )
            classifier, report = train_text_classifier(documents, config)
            progress.update(job, completed=1, total=1)
        classifier.save(out, report)
        write_effective_config(config, out)

    console.print(
        f"[green]✓[/green] trained {config.model.value} "
        f"on {report['training_rows']} documents ({report['n_features']} features)"
    )
    console.print(f"[green]✓[/green] model bundle: {config.output_directory}")


@cli.command()
@click.option(
    '--model', 'model_dir',
    type=click.Path(path_type=Path),
    required=True,
    help='classifier bundle'
)
@click.option(
    '--in', 'input_path',
    type=click.Path(path_type=Path),
    required=True,
    help='texts to classify'
)
@click.option(
    '--out', 'output_path',
    type=click.Path(path_type=Path),
    help='prediction TSV (stdout if not given)'
)
@handle_errors
def predict(model_dir: Path, input_path: Path, output_path: Optional[Path]) -> None:
    """label texts with a trained bundle: `id label p(class)...` rows."""
    classifier = TextClassifier.load(model_dir)
    if not input_path.exists():
        raise ValidationError(f"input file not found: {input_path}")
    pairs = read_texts(input_path)
    ids = [doc_id for doc_id, _ in pairs]
    probabilities = classifier.predict_proba([text for _, text in pairs])
    labels: List[str] = []
    if pairs:
        labels = [classifier.classes[i] for i in probabilities.argmax(axis=1)]
    content = format_predictions(
        classifier.classes, probability_rows(ids, labels, probabilities)
    )

    if output_path is None:
        click.echo(content, nl=False)
        return
    write_text(output_path, content)
    console.print(f"[green]✓[/green] {len(pairs)} predictions: {output_path}")


def _gold(data_path: Path, task: Task) -> List[LabeledDocument]:
    documents = labeled_for(read_corpus(data_path), task)
    if not documents:
        raise ValidationError(
            f"{data_path} has no documents labeled for task {task.value}"
        )
    return documents


@cli.command(name="eval")
@click.option(
    '--data', 'data_path',
    type=click.Path(exists=True, path_type=Path),
    required=True,
    help='gold corpus'
)
@click.option(
    '--model', 'model_dir',
    type=click.Path(path_type=Path),
    help='classifier bundle to score'
)
@click.option(
    '--predictions',
    type=click.Path(exists=True, path_type=Path),
    help='prediction TSV to score'
)
@click.option(
    '--task',
    type=click.Choice(TASKS, case_sensitive=False),
    help='task of --predictions (default: 6-A)'
)
@click.option(
    '--out', 'output_directory',
    type=click.Path(path_type=Path),
    help='write eval.tsv and eval.json here'
)
@handle_errors
def evaluate(
    data_path: Path,
    model_dir: Optional[Path],
    predictions: Optional[Path],
    task: Optional[str],
    output_directory: Optional[Path],
) -> None:
    """macro F1, per-class scores and the confusion matrix against gold labels."""
    if (model_dir is None) == (predictions is None):
        raise ValidationError("pass exactly one of --model or --predictions")

    if model_dir is not None:
        classifier = TextClassifier.load(model_dir)
        gold = _gold(data_path, classifier.task)
        truth = labels_for(gold, classifier.task)
        predicted = classifier.predict([doc.raw_text for doc in gold])
        classes = classifier.task.classes
    else:
        parsed = Task.parse(task or Task.OFFENSE.value)
        gold = _gold(data_path, parsed)
        truth_by_id = dict(zip((doc.id for doc in gold), labels_for(gold, parsed)))
        _, rows = read_predictions(predictions)  # type: ignore[arg-type]
        predicted_by_id = {doc_id: label for doc_id, label, _ in rows}
        missing = [doc_id for doc_id in truth_by_id if doc_id not in predicted_by_id]
        if missing:
            raise ValidationError(
                f"{len(missing)} gold documents have no prediction "
                f"(first: {missing[0]})"
            )
        truth = list(truth_by_id.values())
        predicted = [predicted_by_id[doc_id] for doc_id in truth_by_id]
        classes = parsed.classes

    report = macro_f1(truth, predicted, classes)
    console.print(eval_table(report))
    console.print(confusion_table(report))
    console.print(f"macro F1 = {report.macro_f1:.4f}")
    if output_directory is not None:
        paths = write_eval_report(report, output_directory)
        console.print(f"[green]✓[/green] report: {paths['tsv']}")


@cli.command()
@click.option(
    '--data', 'data_path',
    type=click.Path(path_type=Path),
    help='labeled corpus to split'
)
@click.option(
    '--synthetic',
    type=click.IntRange(min=10),
    help='generate a synthetic corpus of N documents instead'
)
@click.option(
    '--task',
    type=click.Choice(TASKS, case_sensitive=False),
    help='target label column (default: 6-A)'
)
@click.option(
    '--out', 'output_directory',
    type=click.Path(path_type=Path),
    required=True,
    help='report directory'
)
@click.option(
    '--models',
    'models',
    multiple=True,
    type=click.Choice([kind.value for kind in ModelKind]),
    help='model kinds (repeatable, default: forest)',
)
@click.option(
    '--variants',
    multiple=True,
    type=click.Choice(list(VARIANTS)),
    help='feature variants (repeatable)'
)
@click.option(
    '--sampling', 'sampling_modes',
    multiple=True,
    type=click.Choice([mode.value for mode in SamplingMode]),
    help='sampling regimes (repeatable, default: balanced)'
)
@click.option(
    '--normalization', type=click.Choice(['both', 'on', 'off']), default='both',
    help='run cells with normalization on, off, or both (default: both)',
)
@click.option(
    '--seeds',
    multiple=True,
    type=int,
    help='one cell per seed (default: --seed)'
)
@click.option(
    '--dim',
    type=click.IntRange(min=1),
    help='corpus skip-gram dimension for +U cells (default: 50)'
)
@run_options
@handle_errors
def ablate(
    data_path: Optional[Path],
    synthetic: Optional[int],
    task: Optional[str],
    output_directory: Path,
    models: Tuple[str, ...],
    variants: Tuple[str, ...],
    sampling_modes: Tuple[str, ...],
    normalization: str,
    seeds: Tuple[int, ...],
    dim: Optional[int],
    config_file: Optional[Path],
    settings: Tuple[str, ...],
    seed: Optional[int],
    jobs: Optional[int],
    no_normalize: bool,
) -> None:
    """train and score a grid of model x feature x sampling x normalization cells."""
    if (data_path is None) == (synthetic is None):
        raise ValidationError("pass exactly one of --data or --synthetic")

    with output_lock(output_directory) as out:
        overrides: Dict[str, Any] = {
            "task": task,
            "data_path": data_path,
            "output_directory": out,
            "skipgram_dim": dim,
        }
        if synthetic is not None:
            corpus = generate_corpus(
                SyntheticConfig(
                    documents=synthetic, seed=seed if seed is not None else 42
                )
            )
            write_text(out / "corpus.tsv", serialize_olid(corpus.documents))
            write_text(out / "lexicon.tsv", corpus.lexicon_tsv())
            overrides.update(
                data_path=out / "corpus.tsv", lexicon_path=out / "lexicon.tsv"
            )
            console.print(
                f"[green]✓[/green] synthetic corpus: {out / 'corpus.tsv'} "
                f"({synthetic} documents)"
            )
        config = build_config(config_file, settings, seed, jobs, False, **overrides)

        normalize = {"both": [True, False], "on": [True], "off": [False]}[normalization]
        if no_normalize:
            normalize = [False]
        grid = AblationGrid(
            models=[ModelKind(kind) for kind in models] or [ModelKind.FOREST],
            variants=list(variants) or list(VARIANTS),
            sampling=[SamplingMode(mode) for mode in sampling_modes] or [
                SamplingMode.BALANCED
            ],
            normalize=normalize,
            seeds=list(seeds) or [config.seed],
        )
        corpus_path: Path = config.data_path  # type: ignore[assignment]
        documents = labeled_for(read_corpus(corpus_path), config.task)
        split = stratified_split(documents, config.task, seed=config.seed)
        resources = load_resources(config)
        with spinner() as progress:
            job = progress.add_task("running ablation grid...", total=None)
            report = run_ablation(grid, split, config, resources, jobs=config.jobs)
            progress.update(job, completed=1, total=1)
        paths = write_ablation_report(report, out)
        write_effective_config(config, out)

    console.print(ablation_table(report))
    for delta in report.normalization_deltas():
        console.print(
            f"normalization effect on {delta['label']} ({delta['sampling']}): "
            f"{delta['delta']:+.4f}"
        )
    if report.partial:
        console.print("[yellow]warning: some cells failed; see ablation.json[/yellow]")
    console.print(f"[green]✓[/green] ablation matrix: {paths['tsv']}")


@cli.command()
@click.option(
    '--spec', 'spec_path',
    type=click.Path(path_type=Path),
    help='ensemble JSON file'
)
@click.option(
    '--member', 'members',
    multiple=True,
    type=click.Path(path_type=Path),
    help='bundle (repeatable)'
)
@click.option(
    '--weight', 'weights',
    multiple=True,
    type=float,
    help='member weight, in --member order'
)
@click.option(
    '--save-spec',
    type=click.Path(path_type=Path),
    help='write the --member ensemble to a JSON file'
)
@click.option(
    '--in', 'input_path',
    type=click.Path(path_type=Path),
    help='texts to classify'
)
@click.option(
    '--out', 'output_path',
    type=click.Path(path_type=Path),
    help='prediction TSV (stdout if not given)'
)
@handle_errors
def ensemble(
    spec_path: Optional[Path],
    members: Tuple[Path, ...],
    weights: Tuple[float, ...],
    save_spec: Optional[Path],
    input_path: Optional[Path],
    output_path: Optional[Path],
) -> None:
    """soft-vote several bundles: the weighted mean of their class probabilities."""
    if (spec_path is None) == (not members):
        raise ValidationError("pass either --spec or one or more --member bundles")
    if weights and len(weights) != len(members):
        raise ValidationError(f"{len(weights)} weights for {len(members)} members")

    if spec_path is not None:
        if not spec_path.exists():
            raise ValidationError(f"ensemble file not found: {spec_path}")
        spec_file, paths = read_ensemble_file(spec_path)
        member_weights: Optional[List[float]] = (
            [member.weight for member in spec_file.members]  # type: ignore[misc]
            if spec_file.members[0].weight is not None
            else None
        )
        classes: Optional[Sequence[str]] = spec_file.classes
    else:
        paths = list(members)
        member_weights = list(weights) or None
        classes = None

    voters = [TextClassifier.load(path) for path in paths]
    spec = EnsembleSpec.build(
        voters, member_weights, classes, names=[str(path) for path in paths]
    )

    if save_spec is not None:
        entries = [
            EnsembleMemberEntry(
                model=os.path.relpath(path.resolve(), save_spec.resolve().parent),
                weight=member_weights[index] if member_weights else None,
            )
            for index, path in enumerate(paths)
        ]
        write_text(
            save_spec,
            dumps_json(
                EnsembleFile(members=entries, classes=list(spec.classes)).model_dump()
            ),
        )
        console.print(f"[green]✓[/green] ensemble spec: {save_spec}")

    if input_path is None:
        return
    if not input_path.exists():
        raise ValidationError(f"input file not found: {input_path}")
    pairs = read_texts(input_path)
    probabilities, labels = soft_vote_batch(spec, [text for _, text in pairs])
    content = format_predictions(
        spec.classes,
        probability_rows([doc_id for doc_id, _ in pairs], labels, probabilities),
    )
    if output_path is None:
        click.echo(content, nl=False)
        return
    write_text(output_path, content)
    console.print(
        f"[green]✓[/green] {len(pairs)} ensemble predictions: {output_path}"
    )


@cli.command()
@click.option(
    '--ratings',
    type=click.Path(exists=True, path_type=Path),
    required=True,
    help='annotation file'
)
@click.option(
    '--mode', type=click.Choice(['fleiss', 'cohen']), default='fleiss',
    help='fleiss: item x category counts; cohen: two label columns (default: fleiss)',
)
@handle_errors
def kappa(ratings: Path, mode: str) -> None:
    """inter-annotator agreement."""
    report: AgreementReport
    if mode == "fleiss":
        _, _, counts = read_rating_counts(ratings)
        report = fleiss_kappa(counts)
    else:
        first, second = read_rater_labels(ratings)
        report = cohen_kappa(first, second)
    console.print(f"κ = {report.kappa:.6f}")
    console.print(agreement_table(report, mode))


@cli.command(name="corpus-stats")
@click.argument(
    'data_paths',
    nargs=-1,
    required=True,
    type=click.Path(exists=True, path_type=Path)
)
@click.option(
    '--out', 'output_path',
    type=click.Path(path_type=Path),
    help='write the counts as TSV'
)
@handle_errors
def corpus_stats(data_paths: Tuple[Path, ...], output_path: Optional[Path]) -> None:
    """document counts per source and per label level."""
    documents: List[LabeledDocument] = []
    for path in data_paths:
        documents.extend(read_corpus(path))
    stats = corpus_statistics(documents)
    for table in statistics_tables(stats):
        console.print(table)
    if output_path is not None:
        write_text(output_path, statistics_tsv(stats))
        console.print(f"[green]✓[/green] statistics: {output_path}")


@cli.command()
@click.option(
    '--data', 'data_path',
    type=click.Path(exists=True, path_type=Path),
    required=True,
    help='text corpus'
)
@click.option(
    '--out', 'output_path',
    type=click.Path(path_type=Path),
    required=True,
    help='output .vec file'
)
@click.option(
    '--dim',
    type=click.IntRange(min=1),
    default=100,
    help='vector dimension (default: 100)'
)
@click.option(
    '--epochs',
    type=click.IntRange(min=1),
    default=5,
    help='passes over the corpus (default: 5)'
)
@click.option(
    '--window',
    type=click.IntRange(min=1),
    default=5,
    help='context window (default: 5)'
)
@click.option(
    '--negative',
    type=click.IntRange(min=1),
    default=5,
    help='negative samples (default: 5)'
)
@click.option(
    '--min-count',
    type=click.IntRange(min=1),
    default=1,
    help='minimum word frequency (default: 1)'
)
@click.option(
    '--no-subwords',
    is_flag=True,
    help='plain skip-gram without character n-grams'
)
@click.option(
    '--combine', 'combine_path',
    type=click.Path(exists=True, path_type=Path),
    help='.vec to merge with'
)
@click.option(
    '--k', 'rank',
    type=click.IntRange(min=1),
    help='dimension of the combined space'
)
@click.option('--seed', type=int, default=42, help='seed (default: 42)')
@click.option('--no-normalize', is_flag=True, help='whitespace tokenization only')
@handle_errors
def embed(
    data_path: Path,
    output_path: Path,
    dim: int,
    epochs: int,
    window: int,
    negative: int,
    min_count: int,
    no_subwords: bool,
    combine_path: Optional[Path],
    rank: Optional[int],
    seed: int,
    no_normalize: bool,
) -> None:
    """train subword skip-gram vectors, optionally merged with another space by SVD."""
    dictionary: Optional[VariantDictionary] = None
    if not no_normalize:
        config = get_config()
        dictionary = load_resources(config).dictionary
    texts = [text for _, text in read_texts(data_path)]
    documents = [
        (
            unnormalized_document(text)
            if no_normalize
            else normalize_text(text, dictionary)
        )
        for text in texts
    ]
    corpus = [list(document.tokens) for document in documents]
    skipgram = SkipgramConfig(
        dim=dim,
        epochs=epochs,
        window=window,
        negative=negative,
        min_count=min_count,
        subwords=not no_subwords,
        seed=seed,
    )
    with spinner() as progress:
        job = progress.add_task(
            f"training {dim}-d skip-gram on {len(corpus)} texts...", total=None
        )
        embedding = train_skipgram(corpus, skipgram)
        progress.update(job, completed=1, total=1)

    table = Table(title="embedding coverage (OOV rate by type)")
    table.add_column("space", style="cyan")
    table.add_column("words", justify="right")
    table.add_column("dim", justify="right")
    table.add_column("OOV rate", justify="right")
    table.add_row(
        "corpus skip-gram",
        str(len(embedding)),
        str(embedding.dim),
        f"{coverage(embedding, corpus):.4f}",
    )

    if combine_path is not None:
        other = read_embedding(combine_path)
        table.add_row(
            combine_path.name,
            str(len(other)),
            str(other.dim),
            f"{coverage(other, corpus):.4f}",
        )
        embedding = combine_embeddings(other, embedding, rank)
        table.add_row(
            "combined",
            str(len(embedding)),
            str(embedding.dim),
            f"{coverage(embedding, corpus):.4f}",
        )

    output_path.parent.mkdir(parents=True, exist_ok=True)
    write_embedding(embedding, output_path)
    console.print(table)
    console.print(f"[green]✓[/green] embedding: {output_path}")


@cli.command()
@click.option(
    '--config', 'config_file',
    type=click.Path(path_type=Path),
    help='flat key=value config file'
)
@handle_errors
def check(config_file: Optional[Path]) -> None:
    """check configuration and resource files."""
    config = load_run_config(config_file)

    table = Table(title="system status")
    table.add_column("component", style="cyan")
    table.add_column("status", style="bold")
    table.add_column("details")

    resources = (
        ("leet map", config.leet_path, "leet.tsv"),
        ("variant dictionary", config.variants_path, "variants.tsv"),
        ("lexicon", config.lexicon_path, "lexicon.tsv"),
        ("clean words", config.clean_words_path, "clean_words.txt"),
    )
    for name, path, packaged in resources:
        if path is not None:
            location = str(path)
        else:
            location = f"packaged ({resource_path(packaged)})"
        table.add_row(name, "[green]✓[/green]", location)

    try:
        loaded = load_resources(config)
        table.add_row(
            "resources",
            "[green]✓[/green]",
            f"{len(loaded.dictionary)} variants, {len(loaded.lexicon)} lexicon entries",
        )
    except OffensiveClassifierError as e:
        table.add_row("resources", "[red]✗[/red]", escape(str(e)))

    if config.data_path is not None:
        table.add_row("data", "[green]✓[/green]", str(config.data_path))
    else:
        table.add_row("data", "[yellow]-[/yellow]", "not configured")
    if config.embedding_path is not None:
        table.add_row("embedding", "[green]✓[/green]", str(config.embedding_path))
    table.add_row(
        "task",
        "[green]✓[/green]",
        f"{config.task.value} ({', '.join(config.task.classes)})",
    )
    table.add_row("model", "[green]✓[/green]", config.model.value)
    table.add_row("seed / jobs", "[green]✓[/green]", f"{config.seed} / {config.jobs}")
    console.print(table)


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """run one command; 0 on success, 1 on usage or validation errors, 2 on failures."""
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="offclf",
            standalone_mode=False,
        )
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        error_console.print("[red]aborted[/red]")
        return 1
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    return result if isinstance(result, int) else 0


def main() -> None:
    """main entry point for the CLI."""
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
