#pragma once
#define SPARROW_RENDER_CONFIG 1
