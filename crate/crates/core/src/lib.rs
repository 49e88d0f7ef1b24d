pub mod algebra;
pub mod foasc;
pub mod mv;
pub mod protocols;
pub mod sim;
pub mod verify;
