"""trustlink: trustworthy semantic-transmission link simulator.

Thin re-export of the compiled extension. The heavy lifting (Galois/RS
codec, hybrid-encryption envelope, fading channels, ZF-LMMSE detection,
the ARQ pipeline, and the sweep harness) lives in the C++ core.
"""

from ._core import (  # noqa: F401
    ChannelModel,
    ChannelRealization,
    FeatureTensor,
    GfField,
    LinkConfig,
    LinkMode,
    LinkReport,
    Modulation,
    RsCode,
    RsProfile,
    SweepRow,
    SweepSpec,
    csv_header,
    demodulate_qpsk,
    deserialize_features,
    digest128,
    generate_features,
    keygen,
    modulate_qpsk,
    open,
    pack_symbols,
    run_frames,
    run_link,
    run_link_pair,
    run_sweep,
    sample_channel,
    seal,
    serialize_features,
    sha3_256,
    transmit,
    unpack_symbols,
    write_csv,
    zf_lmmse_detect,
)

__all__ = [
    "ChannelModel",
    "ChannelRealization",
    "FeatureTensor",
    "GfField",
    "LinkConfig",
    "LinkMode",
    "LinkReport",
    "Modulation",
    "RsCode",
    "RsProfile",
    "SweepRow",
    "SweepSpec",
    "csv_header",
    "demodulate_qpsk",
    "deserialize_features",
    "digest128",
    "generate_features",
    "keygen",
    "modulate_qpsk",
    "open",
    "pack_symbols",
    "run_frames",
    "run_link",
    "run_link_pair",
    "run_sweep",
    "sample_channel",
    "seal",
    "serialize_features",
    "sha3_256",
    "transmit",
    "unpack_symbols",
    "write_csv",
    "zf_lmmse_detect",
]

__version__ = "0.1.0"
