import logging

import blinker

LOG = logging.getLogger('reliefscan.experiment')

hook_signals = blinker.Namespace()

fold_trained_hook = hook_signals.signal('fold-trained')
sample_scored_hook = hook_signals.signal('sample-scored')
regime_complete_hook = hook_signals.signal('regime-complete')


class HookTrigger:

    def __init__(self, config=None) -> None:
        self.config = config
        if config is not None:
            self.init_app(config)

    def init_app(self, config) -> None:
        self.config = config
        fold_trained_hook.connect(self.process_fold_trained)
        sample_scored_hook.connect(self.process_sample_scored)
        regime_complete_hook.connect(self.process_regime_complete)

    def process_fold_trained(self, sender, **kwargs):
        LOG.debug('Trained model %s (fold %s, pitch %s um)', kwargs.get('model_id'), kwargs.get('fold'),
                  kwargs.get('pitch_um'))

    def process_sample_scored(self, sender, **kwargs):
        LOG.debug('Scored %s at %s um: dice %.4f', kwargs.get('sample_id'), kwargs.get('pitch_um'),
                  kwargs.get('dice', float('nan')))

    def process_regime_complete(self, sender, **kwargs):
        LOG.info('Regime %s complete: %s rows', sender, kwargs.get('rows'))
