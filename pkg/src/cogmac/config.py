"""JSON configuration ingestion for the CLI.

One document with sections {network, sensing | scenario, timing_profile,
backoff, experiment}. SNR values cross the boundary in dB and are converted
to linear ratios here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .contention import BackoffParams, MacTiming, MODES, RTS_CTS, TIMING_PROFILES
from .errors import ConfigError
from .scenario import (
    DEFAULT_PROB_H0_RANGE,
    DEFAULT_SAMPLING_FREQ_HZ,
    DEFAULT_SNR_DB_RANGE,
    DEFAULT_TARGET_PD_RANGE,
    ScenarioSpec,
    generate,
)
from .sensing import LinkSensing, SensingParams, snr_db_to_linear
from .throughput import NetworkConfig, PROTOCOLS, SINGLE


@dataclass(frozen=True)
class ExperimentSettings:
    """Per-run knobs; CLI flags override these."""

    tau_s: float | None = None
    w: int | None = None
    cycles: int = 100_000
    seed: int = 0
    replications: int = 1
    protocol: str = SINGLE
    sweep: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LoadedConfig:
    network: NetworkConfig
    experiment: ExperimentSettings
    snapshot: dict        # resolved JSON document, for the run manifest


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing required field {where}.{key}")
    return section[key]


def _timing_from(doc: dict) -> MacTiming:
    profile = doc.get("timing_profile", "bianchi-r3-defaults")
    if isinstance(profile, str):
        if profile not in TIMING_PROFILES:
            raise ConfigError(
                f"unknown timing_profile {profile!r}; "
                f"known profiles: {sorted(TIMING_PROFILES)}"
            )
        return TIMING_PROFILES[profile]
    if not isinstance(profile, dict):
        raise ConfigError("timing_profile must be a profile name or an object")
    try:
        return MacTiming(**profile)
    except TypeError as exc:
        raise ConfigError(f"bad timing_profile: {exc}") from exc


def _mode_from(network_doc: dict) -> str:
    mode = network_doc.get("mode", "basic")
    if mode == "rts":
        mode = RTS_CTS
    if mode not in MODES:
        raise ConfigError(f"network.mode must be one of basic|rts, got {mode!r}")
    return mode


def _links_from_sensing(doc: dict, num_channels: int) -> tuple[LinkSensing, ...]:
    sensing = doc["sensing"]
    fs = sensing.get("sampling_freq_hz", DEFAULT_SAMPLING_FREQ_HZ)
    links = []
    for idx, entry in enumerate(_require(sensing, "links", "sensing")):
        where = f"sensing.links[{idx}]"
        try:
            params = SensingParams(
                snr=snr_db_to_linear(_require(entry, "snr_db", where)),
                sampling_freq_hz=fs,
                target_pd=_require(entry, "target_pd", where),
                prob_h0=_require(entry, "prob_h0", where),
                noise_power=entry.get("noise_power", 1.0),
            )
        except ConfigError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
        links.append(LinkSensing.uniform(params, num_channels))
    return tuple(links)


def load_config(path: str | Path) -> LoadedConfig:
    """Parse and validate a config file into a NetworkConfig + run settings."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    return load_document(doc)


def load_document(doc) -> LoadedConfig:
    """Validate an already-parsed config document."""
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")

    network_doc = doc.get("network", {})
    timing = _timing_from(doc)
    mode = _mode_from(network_doc)
    num_channels = network_doc.get("num_channels", 1)
    cycle_T_s = network_doc.get("cycle_T_s", 0.1)
    backoff = BackoffParams(
        w_min=network_doc.get("w_min", 32),
        max_stage=network_doc.get("max_stage", 3),
    )
    w_max = network_doc.get("w_max", 1024)

    if ("sensing" in doc) == ("scenario" in doc):
        raise ConfigError("config must contain exactly one of 'sensing' or 'scenario'")

    if "sensing" in doc:
        links = _links_from_sensing(doc, num_channels)
        network = NetworkConfig(
            links=links,
            num_channels=num_channels,
            cycle_T_s=cycle_T_s,
            backoff=backoff,
            w_max=w_max,
            timing=timing,
            mode=mode,
        )
    else:
        sc = doc["scenario"]
        spec = ScenarioSpec(
            n_links=_require(sc, "n_links", "scenario"),
            m_channels=sc.get("m_channels", num_channels),
            max_stage=backoff.max_stage,
            snr_db_range=tuple(sc.get("snr_db_range", DEFAULT_SNR_DB_RANGE)),
            target_pd_range=tuple(sc.get("target_pd_range", DEFAULT_TARGET_PD_RANGE)),
            prob_h0_range=tuple(sc.get("prob_h0_range", DEFAULT_PROB_H0_RANGE)),
            seed=sc.get("seed", 0),
            homogeneous=sc.get("homogeneous", False),
        )
        if spec.m_channels != num_channels:
            raise ConfigError("scenario.m_channels disagrees with network.num_channels")
        network = generate(
            spec,
            w_min=backoff.w_min,
            w_max=w_max,
            cycle_T_s=cycle_T_s,
            timing=timing,
            mode=mode,
            sampling_freq_hz=sc.get("sampling_freq_hz", DEFAULT_SAMPLING_FREQ_HZ),
        )

    exp_doc = doc.get("experiment", {})
    protocol = exp_doc.get("protocol", SINGLE)
    if protocol not in PROTOCOLS:
        raise ConfigError(f"experiment.protocol must be one of {PROTOCOLS}, got {protocol!r}")
    experiment = ExperimentSettings(
        tau_s=exp_doc.get("tau_s"),
        w=exp_doc.get("w"),
        cycles=exp_doc.get("cycles", 100_000),
        seed=exp_doc.get("seed", 0),
        replications=exp_doc.get("replications", 1),
        protocol=protocol,
        sweep=exp_doc.get("sweep", {}),
    )
    return LoadedConfig(network=network, experiment=experiment, snapshot=doc)


def with_num_links(loaded: LoadedConfig, n: int) -> LoadedConfig:
    """Same config with n secondary links.

    Scenario-generated networks are regenerated at the new size; explicitly
    listed sensing parameters can only shrink (first n entries are kept).
    """
    if n < 1:
        raise ConfigError("number of links must be >= 1")
    doc = json.loads(json.dumps(loaded.snapshot))
    if "scenario" in doc:
        doc["scenario"]["n_links"] = n
    else:
        links = doc["sensing"]["links"]
        if n > len(links):
            raise ConfigError(
                f"cannot grow an explicit sensing list from {len(links)} to {n} links"
            )
        doc["sensing"]["links"] = links[:n]
    return load_document(doc)
