"""Triplet-producing agents and the synthetic structured corpus.

Three triplet sources are supported: a random splitter that cuts a fixed
length context at two uniform indices, a heuristic subject/predicate/object
extractor driven by a verb lexicon, and a loader for externally produced
gold triples (JSONL).  A small subject-verb-object sentence generator with
verb-conditioned object preferences provides a self-contained corpus whose
structured triples are known exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .corpus import (
    Context,
    Document,
    DocumentCollection,
    iter_sentences,
    normalize_text,
    sample_contexts,
)
from .ngrams import LingSet, ngram_set


class ContextTooShort(ValueError):
    """A context has too few tokens to cut into three nonempty segments."""


class MalformedLine(ValueError):
    """A gold-triple line could not be turned into a triplet."""

    def __init__(self, message: str, line_no: int) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SourceExhausted(RuntimeError):
    """A triplet source has an empty pool and cannot fill a step sample."""


AGENT_KINDS = ("random", "extractor", "gold_file")

_DATA_DIR = Path(__file__).parent / "data"
DEFAULT_LEXICON_PATH = _DATA_DIR / "verb_lexicon.txt"


@dataclass(frozen=True)
class Triplet:
    """One agent action: an ordered (x, y, z) segmentation of a text span."""

    x: LingSet
    y: LingSet
    z: LingSet
    x_text: str
    y_text: str
    z_text: str
    origin: str = ""


@dataclass(frozen=True)
class StepSample:
    """The multiset of actions taken at one simulation step."""

    k: int
    triplets: tuple[Triplet, ...]
    agent_label: str


@dataclass(frozen=True)
class AgentSpec:
    """How to obtain triplets for one simulated agent.

    ``pool`` lets callers hand a prebuilt triple list straight to a
    gold-style agent (the synthetic pipeline does this); otherwise
    ``gold_file`` reads ``path`` and ``extractor`` mines the corpus.
    """

    kind: str
    name: str = ""
    path: str | Path | None = None
    pool: tuple[Triplet, ...] | None = None
    lexicon_path: str | Path | None = None

    def __post_init__(self) -> None:
        if self.kind not in AGENT_KINDS:
            raise ValueError(f"agent kind must be one of {AGENT_KINDS}, got {self.kind!r}")
        if not self.name:
            object.__setattr__(self, "name", self.kind)


def make_triplet(
    x_text: str,
    y_text: str,
    z_text: str,
    origin: str = "",
    n_min: int = 1,
    n_max: int = 3,
    include_space: bool = True,
) -> Triplet:
    """Build a triplet whose gram sets are exactly those of its surfaces."""
    return Triplet(
        x=ngram_set(x_text, n_min, n_max, include_space),
        y=ngram_set(y_text, n_min, n_max, include_space),
        z=ngram_set(z_text, n_min, n_max, include_space),
        x_text=x_text,
        y_text=y_text,
        z_text=z_text,
        origin=origin,
    )


def random_split_agent(
    ctx: Context,
    rng: np.random.Generator,
    n_min: int = 1,
    n_max: int = 3,
    include_space: bool = True,
) -> Triplet:
    """Cut a context at a uniformly chosen pair of indices 1 <= i < j <= L-1.

    All C(L-1, 2) index pairs are equally likely, and each of the three
    segments is nonempty by construction.
    """
    tokens = ctx.tokens
    length = len(tokens)
    if length < 3:
        raise ContextTooShort(f"need >= 3 tokens to split, got {length}")
    cuts = rng.choice(length - 1, size=2, replace=False) + 1
    i, j = int(cuts.min()), int(cuts.max())
    return make_triplet(
        " ".join(tokens[:i]),
        " ".join(tokens[i:j]),
        " ".join(tokens[j:]),
        origin=f"{ctx.doc_id}@{ctx.offset}",
        n_min=n_min,
        n_max=n_max,
        include_space=include_space,
    )


def load_verb_lexicon(path: str | Path | None = None) -> frozenset[str]:
    """Read a one-token-per-line verb list; blank lines and # comments skipped."""
    p = Path(path) if path is not None else DEFAULT_LEXICON_PATH
    tokens = []
    for line in p.read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            tokens.append(word.lower())
    return frozenset(tokens)


def heuristic_extract(
    sentence: str,
    verb_lexicon: frozenset[str],
    origin: str = "",
    n_min: int = 1,
    n_max: int = 3,
    include_space: bool = True,
) -> Triplet | None:
    """Split a sentence around its first run of lexicon tokens.

    The predicate is the maximal contiguous run of lexicon tokens starting
    at the first hit; everything before is the subject, everything after
    the object.  Returns None when there is no hit or either side would be
    empty, so each sentence yields at most one triple.
    """
    tokens = sentence.split()
    first = next((i for i, tok in enumerate(tokens) if tok in verb_lexicon), None)
    if first is None:
        return None
    last = first
    while last + 1 < len(tokens) and tokens[last + 1] in verb_lexicon:
        last += 1
    if first == 0 or last == len(tokens) - 1:
        return None
    return make_triplet(
        " ".join(tokens[:first]),
        " ".join(tokens[first : last + 1]),
        " ".join(tokens[last + 1 :]),
        origin=origin,
        n_min=n_min,
        n_max=n_max,
        include_space=include_space,
    )


def load_triplets(
    path: str | Path,
    n_min: int = 1,
    n_max: int = 3,
    include_space: bool = True,
) -> list[Triplet]:
    """Read gold triples from JSONL ({"x","y","z"} strings per line).

    Surfaces are normalized before the gram sets are built; a line whose
    fields are missing, non-string, or empty after normalization is
    rejected with its line number.
    """
    p = Path(path)
    triplets: list[Triplet] = []
    with open(p, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedLine(f"invalid JSON ({exc.msg})", line_no) from exc
            if not isinstance(obj, dict):
                raise MalformedLine("line is not a JSON object", line_no)
            surfaces = []
            for fieldname in ("x", "y", "z"):
                value = obj.get(fieldname)
                if not isinstance(value, str):
                    raise MalformedLine(f"missing or non-string {fieldname!r} field", line_no)
                text = normalize_text(value)
                if not text:
                    raise MalformedLine(f"empty {fieldname!r} field", line_no)
                surfaces.append(text)
            triplets.append(
                make_triplet(
                    *surfaces,
                    origin=f"{p.name}:{line_no}",
                    n_min=n_min,
                    n_max=n_max,
                    include_space=include_space,
                )
            )
    return triplets


def write_triplets(triplets: Iterable[Triplet], path: str | Path) -> None:
    """Write triples as JSONL, the same shape load_triplets reads."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8") as fh:
        for t in triplets:
            fh.write(
                json.dumps({"x": t.x_text, "y": t.y_text, "z": t.z_text}, sort_keys=True) + "\n"
            )


@dataclass(frozen=True)
class SynthGrammar:
    """Phrase pools for the synthetic corpus.

    Each verb owns a preferred subset of the object pool; objects are drawn
    from it with probability ``p_pref`` and uniformly from the whole pool
    otherwise, which plants a tunable predicate-object dependence while
    subjects stay independent.
    """

    subjects: tuple[str, ...]
    verbs: tuple[str, ...]
    objects: tuple[str, ...]
    preferred: dict[str, tuple[str, ...]] = field(default_factory=dict)
    p_pref: float = 0.8

    def __post_init__(self) -> None:
        if not (self.subjects and self.verbs and self.objects):
            raise ValueError("all three phrase pools must be non-empty")
        if not 0.0 <= self.p_pref <= 1.0:
            raise ValueError(f"p_pref must be in [0, 1], got {self.p_pref}")
        for verb in self.verbs:
            if not self.preferred.get(verb):
                raise ValueError(f"verb {verb!r} has no preferred objects")


_SUBJECTS = (
    "the young engineer", "a tired nurse", "the old farmer", "a curious student",
    "the night watchman", "a seasoned pilot", "the village baker", "a quiet librarian",
    "the senior analyst", "a wandering poet", "the field medic", "a junior clerk",
    "the tall gardener", "a patient teacher", "the busy mechanic", "a careful jeweler",
    "the local fisherman", "a brave firefighter", "the head chef", "a shy painter",
    "the veteran sailor", "a clever locksmith", "the stern judge", "a cheerful courier",
)

_VERBS = (
    "repairs", "examines", "paints", "carries", "watches", "measures",
    "cleans", "collects", "delivers", "guards", "sharpens", "stacks",
)

_OBJECTS = (
    "the diesel engine", "a copper kettle", "the wooden fence", "a heavy crate",
    "the harbor lights", "a silver coin", "the garden wall", "a broken clock",
    "the market stall", "a woolen blanket", "the iron gate", "a glass bottle",
    "the stone bridge", "a leather satchel", "the brass lantern", "a paper map",
    "the oak table", "a steel blade", "the velvet curtain", "a clay pot",
    "the canvas tent", "a bronze bell", "the marble statue", "a cotton sack",
)


def default_grammar(p_pref: float = 0.8, preferred_size: int = 4) -> SynthGrammar:
    """Built-in pools; preferred subsets tile the object pool round-robin so
    the marginal object distribution stays uniform."""
    preferred: dict[str, tuple[str, ...]] = {}
    n_obj = len(_OBJECTS)
    for i, verb in enumerate(_VERBS):
        start = (i * preferred_size) % n_obj
        subset = tuple(_OBJECTS[(start + j) % n_obj] for j in range(preferred_size))
        preferred[verb] = subset
    return SynthGrammar(
        subjects=_SUBJECTS,
        verbs=_VERBS,
        objects=_OBJECTS,
        preferred=preferred,
        p_pref=p_pref,
    )


def synth_corpus(
    n_sentences: int,
    rng: np.random.Generator,
    grammar: SynthGrammar | None = None,
    sentences_per_doc: int = 50,
    n_min: int = 1,
    n_max: int = 3,
    include_space: bool = True,
) -> tuple[DocumentCollection, list[Triplet]]:
    """Generate subject-verb-object sentences plus their gold triplets.

    The raw sentences, packed into documents, feed the random agent; the
    gold triplets feed the structured agent.  Deterministic for a fixed
    generator state.
    """
    grammar = grammar if grammar is not None else default_grammar()
    sentences: list[str] = []
    gold: list[Triplet] = []
    for idx in range(n_sentences):
        subject = grammar.subjects[int(rng.integers(len(grammar.subjects)))]
        verb = grammar.verbs[int(rng.integers(len(grammar.verbs)))]
        if rng.random() < grammar.p_pref:
            pool = grammar.preferred[verb]
        else:
            pool = grammar.objects
        obj = pool[int(rng.integers(len(pool)))]
        sentences.append(f"{subject} {verb} {obj}")
        gold.append(
            make_triplet(
                subject, verb, obj,
                origin=f"synthetic:{idx}",
                n_min=n_min, n_max=n_max, include_space=include_space,
            )
        )
    documents = []
    for d_start in range(0, len(sentences), sentences_per_doc):
        chunk = sentences[d_start : d_start + sentences_per_doc]
        documents.append(
            Document(
                id=f"synthetic-{d_start // sentences_per_doc:04d}",
                text=" ".join(chunk),
                source_label="synthetic",
            )
        )
    return DocumentCollection(documents), gold


def _resolve_pool(
    spec: AgentSpec,
    corpus: DocumentCollection | None,
    n_min: int,
    n_max: int,
    include_space: bool,
) -> list[Triplet]:
    if spec.pool is not None:
        return list(spec.pool)
    if spec.kind == "gold_file":
        if spec.path is None:
            raise SourceExhausted(f"agent {spec.name!r} has neither a pool nor a path")
        return load_triplets(spec.path, n_min, n_max, include_space)
    if spec.kind == "extractor":
        if corpus is None:
            raise SourceExhausted(f"agent {spec.name!r} needs a corpus to extract from")
        lexicon = load_verb_lexicon(spec.lexicon_path)
        pool = []
        for doc_id, sentence in iter_sentences(corpus):
            triplet = heuristic_extract(
                sentence, lexicon, origin=doc_id,
                n_min=n_min, n_max=n_max, include_space=include_space,
            )
            if triplet is not None:
                pool.append(triplet)
        return pool
    raise ValueError(f"agent kind {spec.kind!r} has no triple pool")


def build_step_samples(
    source: AgentSpec | str,
    corpus: DocumentCollection | None,
    k_max: int = 120,
    per_step: int = 100,
    rng: np.random.Generator | None = None,
    context_length: int = 10,
    n_min: int = 1,
    n_max: int = 3,
    include_space: bool = True,
) -> list[StepSample]:
    """Produce k_max step samples of exactly per_step triplets each.

    Every step draws from its own generator spawned off ``rng``, so the
    sequence is reproducible regardless of how steps are later scheduled.
    Pool-backed sources (extractor, gold) sample with replacement.
    """
    spec = AgentSpec(kind=source) if isinstance(source, str) else source
    if rng is None:
        rng = np.random.default_rng()
    step_rngs = rng.spawn(k_max)
    samples: list[StepSample] = []
    if spec.kind == "random":
        if corpus is None:
            raise SourceExhausted("the random agent needs a corpus")
        for k, step_rng in enumerate(step_rngs, start=1):
            contexts = sample_contexts(corpus, context_length, per_step, step_rng)
            triplets = tuple(
                random_split_agent(ctx, step_rng, n_min, n_max, include_space)
                for ctx in contexts
            )
            samples.append(StepSample(k=k, triplets=triplets, agent_label=spec.kind))
    else:
        pool = _resolve_pool(spec, corpus, n_min, n_max, include_space)
        if not pool:
            raise SourceExhausted(f"agent {spec.name!r} has an empty triple pool")
        for k, step_rng in enumerate(step_rngs, start=1):
            idx = step_rng.integers(len(pool), size=per_step)
            triplets = tuple(pool[int(i)] for i in idx)
            samples.append(StepSample(k=k, triplets=triplets, agent_label=spec.kind))
    return samples
