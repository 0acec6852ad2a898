#include "skeleton.h"
#include <Eigen/Dense>
