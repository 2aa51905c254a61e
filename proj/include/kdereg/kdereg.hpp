#pragma once

#include "kdereg/backprojection.hpp"
#include "kdereg/bandwidth.hpp"
#include "kdereg/bench/scaling.hpp"
#include "kdereg/bench/svg_plot.hpp"
#include "kdereg/bench/sweep.hpp"
#include "kdereg/bench/synthetic.hpp"
#include "kdereg/correspondence.hpp"
#include "kdereg/depth_image.hpp"
#include "kdereg/errors.hpp"
#include "kdereg/icp.hpp"
#include "kdereg/io/csv.hpp"
#include "kdereg/io/json_io.hpp"
#include "kdereg/io/pgm.hpp"
#include "kdereg/io/ply.hpp"
#include "kdereg/io/png.hpp"
#include "kdereg/kde.hpp"
#include "kdereg/kdtree.hpp"
#include "kdereg/point_cloud.hpp"
#include "kdereg/positional_embedding.hpp"
#include "kdereg/rigid_transform.hpp"
#include "kdereg/solver.hpp"
#include "kdereg/weighting.hpp"
