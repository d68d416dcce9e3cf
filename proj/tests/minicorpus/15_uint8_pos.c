void f(void)
{
    uint8_t y = 1;
    (void)y;
}
