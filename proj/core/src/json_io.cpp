namespace pj {}
