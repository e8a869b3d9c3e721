#ifndef FACMED_FACMED_HPP
#define FACMED_FACMED_HPP

#include "facmed/audit.hpp"
#include "facmed/errors.hpp"
#include "facmed/instance.hpp"
#include "facmed/io.hpp"
#include "facmed/mechanisms.hpp"
#include "facmed/median.hpp"
#include "facmed/oracle.hpp"
#include "facmed/outcome.hpp"
#include "facmed/rational.hpp"
#include "facmed/tree_metric.hpp"
#include "facmed/weighted_multiset.hpp"

#endif
