import sys
import time

class StatusPrinter:
    """
    Helper for printing progress lines to stderr, with a prefix at the start of
    each line.  For example, a sweep over 400 cells reports:

    ```
    [12:00:00     0] sweep: 400 cells of channel_concurrence
    [12:00:03   400] sweep: done
    ```

    The prefix consists of a timestamp and a counter, which the caller can
    adjust with `increment` or `set_count`.  Output goes to `stream`
    (default: `sys.stderr`) so that it never mixes with data written to
    stdout.  A printer created with `quiet=True` swallows everything.
    """

    def __init__(self, count_width=5, stream=None, quiet=False):
        self.count = 0
        self.count_width = count_width
        self.stream = stream
        self.quiet = quiet

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.flush()
        return None

    def set_count(self, x):
        self.count = x

    def increment(self, n=1):
        self.count += n

    def _out(self):
        return self.stream if self.stream is not None else sys.stderr

    def _tag(self):
        time_str = time.strftime('%H:%M:%S')
        return '[%s %*d] ' % (time_str, self.count_width, self.count)

    def print(self, s):
        if self.quiet:
            return
        out = self._out()
        for line in s.split('\n'):
            out.write(self._tag() + line + '\n')

    def flush(self):
        if not self.quiet:
            self._out().flush()

# Printer for library code that is called without one.
SILENT = StatusPrinter(quiet=True)
