from reliefscan.synth.corpus import generate_corpus  # noqa
from reliefscan.synth.generator import SynthConfig, SynthSample, generate_sample  # noqa
