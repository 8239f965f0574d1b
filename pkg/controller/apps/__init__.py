# Controller components
