#ifndef SST_SST_HPP
#define SST_SST_HPP

#include "sst/core.hpp"
#include "sst/io.hpp"
#include "sst/reconstruct.hpp"
#include "sst/ridges.hpp"
#include "sst/signal_model.hpp"
#include "sst/synchrosqueeze.hpp"
#include "sst/transforms.hpp"
#include "sst/wavelet.hpp"
#include "sst/window.hpp"

#endif  // SST_SST_HPP
