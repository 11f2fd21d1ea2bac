fn main() {
    std::process::exit(swipt_sched::cli::main());
}
