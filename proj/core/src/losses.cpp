#include "duosim/losses.hpp"

namespace duosim {

LossAndGrad avg_loss_and_grad(const LossModel& m, const ModelParams& x) {
    return {m.average(x), m.average_gradient(x)};
}

}  // namespace duosim
