from .in_separate_thread import ResultThread, collect_in_batches, in_separate_thread
