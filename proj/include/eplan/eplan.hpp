#pragma once

#include "eplan/conflict.hpp"
#include "eplan/domain.hpp"
#include "eplan/domain_file.hpp"
#include "eplan/errors.hpp"
#include "eplan/evaluate.hpp"
#include "eplan/evaluation.hpp"
#include "eplan/formula.hpp"
#include "eplan/history.hpp"
#include "eplan/parse.hpp"
#include "eplan/search.hpp"
