#include "snsqkd/csv.hpp"

#include "snsqkd/textio.hpp"

namespace snsqkd {

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<Variant>& variants,
                     const std::vector<double>& losses) {
    out << "loss_db,variant,p_opt,mu_opt,delta_opt,rate,p_c,p_t,e_bit,p_ph\n";
    const std::size_t n_loss = losses.size();
    for (std::size_t li = 0; li < n_loss; ++li) {
        for (std::size_t vi = 0; vi < variants.size(); ++vi) {
            const SweepRow& r = rows[vi * n_loss + li];
            out << format_g12(r.loss_db) << ',' << variant_name(r.variant) << ','
                << format_g12(r.opt.best_params.p_send) << ','
                << format_g12(r.opt.best_params.mu) << ','
                << format_g12(r.opt.best_params.delta) << ','
                << format_g12(r.rate.r_total) << ',' << format_g12(r.rate.p_c) << ','
                << format_g12(r.rate.p_t) << ',' << format_g12(r.rate.e_bit) << ','
                << format_g12(r.rate.p_ph) << '\n';
        }
    }
}

}  // namespace snsqkd
