#pragma once
#include <cstdint>
typedef unsigned int u32;
