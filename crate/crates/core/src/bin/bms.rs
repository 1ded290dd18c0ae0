fn main() {
    std::process::exit(boussinesq_ms::cli::run(std::env::args_os()));
}
