fn main() {
    println!("glknot");
}
