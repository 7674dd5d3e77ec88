#pragma once

#include <rct/bit_vector.hpp>
#include <rct/common.hpp>
#include <rct/dataset.hpp>
#include <rct/generator.hpp>
#include <rct/index.hpp>
#include <rct/k2_tree.hpp>
#include <rct/oracle.hpp>
#include <rct/query.hpp>
#include <rct/reference.hpp>
#include <rct/rlz.hpp>
#include <rct/rmq.hpp>
#include <rct/serialize.hpp>
#include <rct/trajectory_log.hpp>
