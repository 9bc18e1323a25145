fn main() {
    std::process::exit(elkwolf_cli::app::run_from_env());
}
