# Tests package for the SC-PAQ Pipeline
