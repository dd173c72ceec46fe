"""Query auto-completion by a bandit-learned mixture of suggestion engines.

The package splits into: `bandit` (Thompson sampling over dynamic action
sets), `engines` (suggestion sources over a query log), `strategies` (how
bandits pick an engine per display position and how clicks update them),
`replay` (offline evaluation on logged queries plus synthetic click
models), `service` (live HTTP loop), and `cli` (experiment commands).
`service` and `cli` are imported as submodules to keep `import qacmix`
light; everything else is re-exported here.
"""

from .bandit import ActionKey, BetaPosterior, NoActionsError, ThompsonSampler
from .config import ConfigError, ExperimentConfig, SyntheticSpec, load_config
from .engines import (
    DictionaryEngine,
    Engine,
    PatternEngine,
    PopularityEngine,
    QueryContext,
    QueryRecord,
    RecencyEngine,
    StaticEngine,
    UserHistoryEngine,
    build_engines,
    normalize_prefix,
    normalize_query,
)
from .replay import (
    ExperimentResult,
    ReplayTuple,
    SyntheticEnvironment,
    build_tuples,
    enumerate_mixtures,
    load_query_log,
    make_probability_environment,
    replay_episodes,
    run_experiment,
    run_synthetic,
)
from .rng import Xoshiro256, derive_seed
from .strategies import (
    LEARNED_KINDS,
    STRATEGY_KINDS,
    DisplayedItem,
    DisplayedList,
    FeedbackError,
    MixtureConfig,
    build_strategy,
)
from .trie import WeightedTrie

__version__ = "0.1.0"

__all__ = [
    "ActionKey",
    "BetaPosterior",
    "ConfigError",
    "DictionaryEngine",
    "DisplayedItem",
    "DisplayedList",
    "Engine",
    "ExperimentConfig",
    "ExperimentResult",
    "FeedbackError",
    "LEARNED_KINDS",
    "MixtureConfig",
    "NoActionsError",
    "PatternEngine",
    "PopularityEngine",
    "QueryContext",
    "QueryRecord",
    "RecencyEngine",
    "ReplayTuple",
    "STRATEGY_KINDS",
    "StaticEngine",
    "SyntheticEnvironment",
    "SyntheticSpec",
    "ThompsonSampler",
    "UserHistoryEngine",
    "WeightedTrie",
    "Xoshiro256",
    "build_engines",
    "build_strategy",
    "build_tuples",
    "derive_seed",
    "enumerate_mixtures",
    "load_query_log",
    "make_probability_environment",
    "normalize_prefix",
    "normalize_query",
    "replay_episodes",
    "run_experiment",
    "run_synthetic",
    "__version__",
]
