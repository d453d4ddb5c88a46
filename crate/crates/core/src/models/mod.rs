//! Worked models: the order-statistics bivariate construction, the four
//! figure configurations and the statistics reported for them.

mod figures;
mod orderstat;
mod stats;

pub use figures::{
    build_figure_config, mixture_marginal_density, Expected, FigureModel, FigureName, Statistic, MIXTURE_RATES,
    ORDERSTAT_ALPHAS, POWER_ALPHAS, POWER_BETAS,
};
pub use orderstat::{
    anti_identity_coupling, bivariate_ml_density, build_orderstat_bivariate, identity_coupling,
    is_doubly_stochastic, orderstat_eigenbasis, orderstat_feed_forward, orderstat_ff_gmml, orderstat_gmml,
    uniform_coupling, EigenBasis, OrderStatConfig,
};
pub use stats::{
    conditional_exceedance, ks_critical_one_sample, ks_critical_two_sample, ks_statistic, ks_two_sample,
    log_correlation, mean, mean_se, pearson, pearson_with_se, quantile, KS_CRITICAL_1PCT,
};
