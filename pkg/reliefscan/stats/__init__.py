from reliefscan.stats.summary import summarize  # noqa
from reliefscan.stats.tests import (friedman, holm_adjust, pages_l,  # noqa
                                    pairwise_wilcoxon, wilcoxon_signed_rank)
