#ifndef TOPOREG_TOPOREG_HPP
#define TOPOREG_TOPOREG_HPP

#include "toporeg/alpha.hpp"
#include "toporeg/datasets.hpp"
#include "toporeg/delaunay.hpp"
#include "toporeg/errors.hpp"
#include "toporeg/graph.hpp"
#include "toporeg/io.hpp"
#include "toporeg/models/common.hpp"
#include "toporeg/models/inner_product.hpp"
#include "toporeg/models/linear.hpp"
#include "toporeg/models/neighbor.hpp"
#include "toporeg/models/random_walk.hpp"
#include "toporeg/optimizer.hpp"
#include "toporeg/persistence.hpp"
#include "toporeg/point_cloud.hpp"
#include "toporeg/predicates.hpp"
#include "toporeg/rng.hpp"
#include "toporeg/svg.hpp"
#include "toporeg/topo_loss.hpp"
#include "toporeg/trajectory.hpp"

#endif
